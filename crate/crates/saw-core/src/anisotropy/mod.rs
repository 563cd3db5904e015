//! Velocity anisotropy profiles: beam-steering, diffraction parameter and
//! the minimally-diffracting orientation search.
//!
//! Beam-steering is eta(theta) = atan(v'(theta)/v(theta)) and the
//! diffraction parameter is gamma = d(eta)/d(theta). Both are evaluated
//! from sampled velocity profiles with five-point stencils; gamma is the
//! dimensionless degree-per-degree derivative (identical to the
//! radian-per-radian value). eta = 0 with gamma = -1 marks a
//! minimally-diffracting orientation.

pub mod contour;
pub mod find_md;
pub mod map;

use thiserror::Error;

use crate::materials::{MaterialConstants, Orientation};
use crate::math::stencil;
use crate::surface_wave::{DirectionSolver, SolverError, Surface};

pub use find_md::{find_md_orientations, FindMdOptions, MDCandidate};
pub use map::{map_parameter_space, MapOptions, MapPoint, MapRow, ParameterMap};

/// Widest theta sampling step the differentiation stencils accept, degrees.
pub const MAX_THETA_STEP_DEG: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("theta grid too coarse: step {step} deg exceeds {max} deg")]
    GridTooCoarse { step: f64, max: f64 },
    #[error("profile needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("velocity profile has holes; differentiation window must be complete")]
    IncompleteProfile,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// How a profile's derivatives were formed.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DerivativeMeta {
    pub step_deg: f64,
    pub scheme: String,
    pub periodic: bool,
}

/// Sampled v(theta) around one cut with derived steering and diffraction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AnisotropyProfile {
    pub phi: f64,
    pub theta_samples: Vec<f64>,
    pub v: Vec<f64>,
    pub eta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub derivative_meta: DerivativeMeta,
}

impl AnisotropyProfile {
    /// Build from uniformly sampled velocities starting at `theta0` with
    /// spacing `step_deg`. `periodic` marks a full 180-degree period.
    pub fn from_velocity(
        phi: f64,
        theta0: f64,
        step_deg: f64,
        v: Vec<f64>,
        periodic: bool,
    ) -> Result<Self, ProfileError> {
        if step_deg > MAX_THETA_STEP_DEG {
            return Err(ProfileError::GridTooCoarse {
                step: step_deg,
                max: MAX_THETA_STEP_DEG,
            });
        }
        if v.len() < 5 {
            return Err(ProfileError::TooFewSamples {
                min: 5,
                got: v.len(),
            });
        }
        let theta_samples: Vec<f64> = (0..v.len())
            .map(|i| theta0 + i as f64 * step_deg)
            .collect();
        let eta = beam_steering(&v, step_deg, periodic);
        let gamma = diffraction_parameter(&eta, step_deg, periodic);
        Ok(Self {
            phi,
            theta_samples,
            v,
            eta,
            gamma,
            derivative_meta: DerivativeMeta {
                step_deg,
                scheme: "five-point".to_string(),
                periodic,
            },
        })
    }

    /// Index of the sample where gamma is smallest.
    pub fn gamma_argmin(&self) -> usize {
        let mut best = 0;
        for (i, g) in self.gamma.iter().enumerate() {
            if *g < self.gamma[best] {
                best = i;
            }
        }
        best
    }
}

/// Beam-steering angle samples (degrees) from velocity samples on a uniform
/// theta grid (degrees).
pub fn beam_steering(v: &[f64], step_deg: f64, periodic: bool) -> Vec<f64> {
    let dv_ddeg = stencil::derivative(v, step_deg, periodic);
    v.iter()
        .zip(dv_ddeg.iter())
        .map(|(vi, dvi)| {
            let dv_drad = dvi * 180.0 / std::f64::consts::PI;
            (dv_drad / vi).atan().to_degrees()
        })
        .collect()
}

/// Diffraction parameter samples gamma = d(eta)/d(theta), degree per degree.
pub fn diffraction_parameter(eta_deg: &[f64], step_deg: f64, periodic: bool) -> Vec<f64> {
    stencil::derivative(eta_deg, step_deg, periodic)
}

/// Gamma straight from velocity derivatives at a point:
/// gamma = (v'' v - v'^2) / (v^2 + v'^2) with theta in radians.
///
/// This is the closed-form derivative of atan(v'/v) and serves as the
/// second, grid-free route to gamma.
pub fn gamma_from_derivatives(v: f64, dv_ddeg: f64, d2v_ddeg2: f64) -> f64 {
    let r = 180.0 / std::f64::consts::PI;
    let vp = dv_ddeg * r;
    let vpp = d2v_ddeg2 * r * r;
    (vpp * v - vp * vp) / (v * v + vp * vp)
}

/// Diffraction-limited quality factor of a flat cavity of width `w_over_lambda`
/// on a substrate with diffraction parameter `gamma`.
///
/// Returns `f64::INFINITY` in the minimally-diffracting limit gamma = -1.
pub fn q_diffraction(gamma: f64, w_over_lambda: f64) -> f64 {
    assert!(
        w_over_lambda > 0.0,
        "aperture must be positive (got {w_over_lambda})"
    );
    let denom = (1.0 + gamma).abs();
    if denom == 0.0 {
        return f64::INFINITY;
    }
    5.0 * std::f64::consts::PI * w_over_lambda * w_over_lambda / denom
}

/// Point values of v, eta and gamma from a local five-point solver stencil.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PointAnisotropy {
    pub v: f64,
    pub eta_deg: f64,
    pub gamma: f64,
}

/// Default local stencil step for point evaluations, degrees.
pub const LOCAL_STENCIL_STEP_DEG: f64 = 0.05;

/// Evaluate v, eta, gamma at one orientation with a local stencil of
/// free-surface solves spaced `step_deg` apart in theta.
pub fn eta_gamma_at(
    mat: &MaterialConstants,
    orientation: &Orientation,
    step_deg: f64,
    hint: Option<f64>,
) -> Result<PointAnisotropy, ProfileError> {
    let mut samples = [0.0; 5];
    // Solve the center first so its velocity seeds the outer points.
    let center = DirectionSolver::new(mat, orientation).solve(Surface::Free, hint)?;
    samples[2] = center.velocity;
    let running_hint = Some(center.velocity);
    for (slot, offset) in [(0usize, -2.0), (1, -1.0), (3, 1.0), (4, 2.0)] {
        let o = orientation.with_theta(orientation.theta() + offset * step_deg);
        let mode = DirectionSolver::new(mat, &o).solve(Surface::Free, running_hint)?;
        samples[slot] = mode.velocity;
    }
    let (d1, d2) = stencil::center_derivatives(&samples, step_deg);
    let v = samples[2];
    let r = 180.0 / std::f64::consts::PI;
    let eta_deg = ((d1 * r) / v).atan().to_degrees();
    let gamma = gamma_from_derivatives(v, d1, d2);
    Ok(PointAnisotropy { v, eta_deg, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cosine_profile(step: f64, n: usize, v0: f64, theta_ref: f64) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let theta = -((n - 1) as f64) / 2.0 * step + i as f64 * step;
                v0 * ((theta - theta_ref).to_radians()).cos()
            })
            .collect()
    }

    #[test]
    fn constant_velocity_gives_zero_steering() {
        let v = vec![3000.0; 41];
        let eta = beam_steering(&v, 0.25, false);
        for e in eta {
            assert!(e.abs() < 1e-12);
        }
    }

    #[test]
    fn cosine_profile_steering_matches_analytic() {
        // v = v0 cos(theta): eta = atan(-tan(theta)) = -theta.
        let step = 0.25;
        let n = 81;
        let v = cosine_profile(step, n, 3600.0, 0.0);
        let eta = beam_steering(&v, step, false);
        for (i, e) in eta.iter().enumerate() {
            let theta = -(n as f64 - 1.0) / 2.0 * step + i as f64 * step;
            assert_relative_eq!(*e, -theta, epsilon = 1e-8, max_relative = 1e-6);
        }
    }

    #[test]
    fn cosine_profile_gamma_is_minus_one_at_peak() {
        let step = 0.25;
        let n = 81;
        let v = cosine_profile(step, n, 3600.0, 0.0);
        let eta = beam_steering(&v, step, false);
        let gamma = diffraction_parameter(&eta, step, false);
        // Center sample sits at the velocity maximum.
        assert_relative_eq!(gamma[n / 2], -1.0, epsilon = 1e-9);
    }

    #[test]
    fn quadratic_profile_slope_matches_analytic() {
        // v = v0 (1 + a theta^2), theta in radians: eta(0) = 0 and
        // d(eta)/d(theta)(0) = 2 a.
        let v0 = 3000.0;
        let a = 0.8;
        let step = 0.1;
        let n = 41;
        let v: Vec<f64> = (0..n)
            .map(|i| {
                let theta = (-(n as f64 - 1.0) / 2.0 * step + i as f64 * step).to_radians();
                v0 * (1.0 + a * theta * theta)
            })
            .collect();
        let eta = beam_steering(&v, step, false);
        let gamma = diffraction_parameter(&eta, step, false);
        let mid = n / 2;
        assert!(eta[mid].abs() < 1e-9);
        assert_relative_eq!(gamma[mid], 2.0 * a, epsilon = 1e-6);
    }

    #[test]
    fn gamma_two_routes_agree_on_synthetic_profiles() {
        // Grid route (d eta / d theta) vs closed-form route from v', v''.
        let v0 = 3421.0;
        let step = 0.05;
        let n = 201;
        let f = |theta_deg: f64| {
            let t = theta_deg.to_radians();
            v0 * (1.0 + 0.01 * (3.0 * t).cos() + 0.002 * (7.0 * t).sin())
        };
        let v: Vec<f64> = (0..n)
            .map(|i| f(-(n as f64 - 1.0) / 2.0 * step + i as f64 * step))
            .collect();
        let eta = beam_steering(&v, step, false);
        let gamma_grid = diffraction_parameter(&eta, step, false);
        let dv = crate::math::stencil::derivative(&v, step, false);
        let d2v = crate::math::stencil::derivative(&dv, step, false);
        for i in 8..n - 8 {
            let direct = gamma_from_derivatives(v[i], dv[i], d2v[i]);
            assert!(
                (gamma_grid[i] - direct).abs() < 1e-6,
                "routes disagree at {i}: {} vs {direct}",
                gamma_grid[i]
            );
        }
    }

    #[test]
    fn eta_integrates_back_to_velocity() {
        // ln v(theta) = ln v(theta_a) + integral of tan(eta) d(theta_rad).
        let v0 = 3000.0;
        let step = 0.1;
        let n = 101;
        let f = |theta_deg: f64| {
            let t = theta_deg.to_radians();
            v0 * (1.0 + 0.05 * (2.0 * t).cos())
        };
        let v: Vec<f64> = (0..n).map(|i| f(i as f64 * step)).collect();
        let eta = beam_steering(&v, step, false);
        let h_rad = step.to_radians();
        let mut ln_v = (v[0]).ln();
        for i in 1..n {
            let t0 = eta[i - 1].to_radians().tan();
            let t1 = eta[i].to_radians().tan();
            ln_v += 0.5 * (t0 + t1) * h_rad;
            assert_relative_eq!(ln_v.exp(), v[i], max_relative = 1e-6);
        }
    }

    #[test]
    fn richardson_step_halving() {
        // Halving the step changes eta and gamma well below the declared
        // convergence tolerances on a smooth profile.
        let v0 = 3300.0;
        let f = |theta_deg: f64| {
            let t = theta_deg.to_radians();
            v0 * (1.0 + 0.02 * (3.0 * t).cos())
        };
        let build = |step: f64, n: usize| {
            let v: Vec<f64> = (0..n).map(|i| f(i as f64 * step)).collect();
            let eta = beam_steering(&v, step, false);
            let gamma = diffraction_parameter(&eta, step, false);
            (eta, gamma)
        };
        let (eta_c, gamma_c) = build(0.25, 81);
        let (eta_f, gamma_f) = build(0.125, 161);
        // Sample 40 of the coarse grid = sample 80 of the fine grid (10 deg).
        assert!((eta_c[40] - eta_f[80]).abs() < 2e-3);
        assert!((gamma_c[40] - gamma_f[80]).abs() < 2e-2);
    }

    #[test]
    fn q_diffraction_values() {
        assert_relative_eq!(
            q_diffraction(0.378, 10.0),
            5.0 * std::f64::consts::PI * 100.0 / 1.378,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            q_diffraction(0.0, 10.0),
            500.0 * std::f64::consts::PI,
            max_relative = 1e-12
        );
        assert!(q_diffraction(-1.0, 17.0).is_infinite());
    }

    #[test]
    fn profile_rejects_coarse_grid() {
        let v = vec![3000.0; 10];
        let err = AnisotropyProfile::from_velocity(0.0, 0.0, 2.0, v, false).unwrap_err();
        assert!(matches!(err, ProfileError::GridTooCoarse { .. }));
    }

    #[test]
    fn stationary_point_has_zero_steering() {
        // Any profile with v'(theta*) = 0 must give eta(theta*) = 0.
        let step = 0.1;
        let n = 81;
        let v = cosine_profile(step, n, 3456.0, 0.0);
        let eta = beam_steering(&v, step, false);
        assert!(eta[n / 2].abs() < 1e-10);
    }
}
