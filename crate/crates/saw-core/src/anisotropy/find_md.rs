//! Minimally-diffracting orientation search: intersect the eta = 0 and
//! gamma = -1 contours, refine each crossing with Newton steps on fresh
//! solver evaluations, and attach cut-error sensitivities.

use rayon::prelude::*;

use super::contour::{contour_intersections, dedupe_points, marching_squares};
use super::map::ParameterMap;
use super::{eta_gamma_at, ProfileError};
use crate::materials::{MaterialConstants, Orientation};
use crate::surface_wave::{coupling_k2, Polarization};

#[derive(Debug, Clone)]
pub struct FindMdOptions {
    /// Local stencil step for point evaluations during refinement, degrees.
    pub stencil_step: f64,
    /// Finite-difference step for the Newton Jacobian and the phi
    /// sensitivities, degrees.
    pub fd_step: f64,
    /// Convergence: |eta| and |gamma + 1| both below this.
    pub tolerance: f64,
    /// Maximum Newton iterations per candidate.
    pub max_iterations: usize,
    /// Merge radius for duplicate intersections, degrees.
    pub dedupe_radius: f64,
}

impl Default for FindMdOptions {
    fn default() -> Self {
        Self {
            stencil_step: super::LOCAL_STENCIL_STEP_DEG,
            fd_step: 0.1,
            tolerance: 5e-3,
            max_iterations: 12,
            dedupe_radius: 1.0,
        }
    }
}

/// One refined minimally-diffracting candidate.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MDCandidate {
    pub orientation: Orientation,
    /// Residual beam-steering at the refined point, degrees.
    pub eta_residual: f64,
    /// Diffraction parameter at the refined point.
    pub gamma_value: f64,
    /// |d eta / d phi|, degree per degree.
    pub sens_eta: f64,
    /// |d gamma / d phi|, per degree.
    pub sens_gamma: f64,
    /// Free-surface velocity, m/s.
    pub velocity: f64,
    pub polarization: Polarization,
    /// Electromechanical coupling, dimensionless.
    pub k2: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Search the map for eta = 0, gamma = -1 crossings and refine them.
///
/// Non-convergent refinements are returned with `converged = false` and the
/// last residuals rather than dropped.
pub fn find_md_orientations(
    mat: &MaterialConstants,
    map: &ParameterMap,
    options: &FindMdOptions,
) -> Result<Vec<MDCandidate>, ProfileError> {
    let eta_field: Vec<Vec<Option<f64>>> = map
        .rows
        .iter()
        .map(|r| r.points.iter().map(|p| p.eta).collect())
        .collect();
    let gamma_field: Vec<Vec<Option<f64>>> = map
        .rows
        .iter()
        .map(|r| r.points.iter().map(|p| p.gamma).collect())
        .collect();

    let eta_zero = marching_squares(
        &eta_field,
        &map.phi_values,
        &map.theta_values,
        0.0,
        map.theta_periodic,
        180.0,
    );
    let gamma_md = marching_squares(
        &gamma_field,
        &map.phi_values,
        &map.theta_values,
        -1.0,
        map.theta_periodic,
        180.0,
    );
    let raw = contour_intersections(&eta_zero, &gamma_md);
    let seeds = dedupe_points(&raw, options.dedupe_radius);

    let mut candidates: Vec<MDCandidate> = seeds
        .par_iter()
        .filter_map(|&seed| refine_candidate(mat, seed, map, options))
        .collect();

    // Refinement can migrate nearby seeds onto the same solution.
    let mut unique: Vec<MDCandidate> = Vec::new();
    for c in candidates.drain(..) {
        let dup = unique.iter_mut().find(|u| {
            let dp = u.orientation.phi() - c.orientation.phi();
            let dt = u.orientation.theta() - c.orientation.theta();
            (dp * dp + dt * dt).sqrt() < options.dedupe_radius
        });
        match dup {
            Some(u) => {
                // Keep the better-converged representative.
                let res = |x: &MDCandidate| x.eta_residual.abs() + (x.gamma_value + 1.0).abs();
                if res(&c) < res(u) {
                    *u = c;
                }
            }
            None => unique.push(c),
        }
    }
    unique.sort_by(|a, b| {
        a.orientation
            .theta()
            .partial_cmp(&b.orientation.theta())
            .unwrap()
            .then(
                b.orientation
                    .phi()
                    .partial_cmp(&a.orientation.phi())
                    .unwrap(),
            )
    });
    Ok(unique)
}

fn refine_candidate(
    mat: &MaterialConstants,
    seed: (f64, f64),
    map: &ParameterMap,
    options: &FindMdOptions,
) -> Option<MDCandidate> {
    let (mut phi, mut theta) = seed;
    let mut hint = interpolate_hint(map, phi, theta);
    let mut converged = false;
    let mut iterations = 0;
    let (mut eta, mut gamma) = (f64::MAX, f64::MAX);
    let mut velocity = 0.0;

    for iter in 0..options.max_iterations {
        iterations = iter + 1;
        let o = Orientation::new(0.0, phi.clamp(-90.0, 90.0), theta).ok()?;
        let p0 = eta_gamma_at(mat, &o, options.stencil_step, hint).ok()?;
        eta = p0.eta_deg;
        gamma = p0.gamma;
        velocity = p0.v;
        hint = Some(p0.v);
        if eta.abs() < options.tolerance && (gamma + 1.0).abs() < options.tolerance {
            converged = true;
            break;
        }

        let h = options.fd_step;
        let phi_p = (phi + h).min(90.0);
        let phi_m = (phi - h).max(-90.0);
        let o_pp = Orientation::new(0.0, phi_p, theta).ok()?;
        let o_pm = Orientation::new(0.0, phi_m, theta).ok()?;
        let o_tp = Orientation::new(0.0, phi.clamp(-90.0, 90.0), theta + h).ok()?;
        let o_tm = Orientation::new(0.0, phi.clamp(-90.0, 90.0), theta - h).ok()?;
        let pp = eta_gamma_at(mat, &o_pp, options.stencil_step, hint).ok()?;
        let pm = eta_gamma_at(mat, &o_pm, options.stencil_step, hint).ok()?;
        let tp = eta_gamma_at(mat, &o_tp, options.stencil_step, hint).ok()?;
        let tm = eta_gamma_at(mat, &o_tm, options.stencil_step, hint).ok()?;

        let j11 = (pp.eta_deg - pm.eta_deg) / (phi_p - phi_m);
        let j12 = (tp.eta_deg - tm.eta_deg) / (2.0 * h);
        let j21 = (pp.gamma - pm.gamma) / (phi_p - phi_m);
        let j22 = (tp.gamma - tm.gamma) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-12 {
            break;
        }
        let f1 = eta;
        let f2 = gamma + 1.0;
        let mut dphi = -(j22 * f1 - j12 * f2) / det;
        let mut dtheta = -(-j21 * f1 + j11 * f2) / det;
        // Damp oversized steps to stay in the seed's basin.
        let norm = (dphi * dphi + dtheta * dtheta).sqrt();
        let cap = 2.0;
        if norm > cap {
            dphi *= cap / norm;
            dtheta *= cap / norm;
        }
        phi = (phi + dphi).clamp(-90.0, 90.0);
        theta += dtheta;
    }

    let orientation = Orientation::new(0.0, phi.clamp(-90.0, 90.0), theta).ok()?;

    // Cut-error sensitivities: central difference in phi (one-sided at the
    // domain edge).
    let h = options.fd_step;
    let phi_p = (orientation.phi() + h).min(90.0);
    let phi_m = (orientation.phi() - h).max(-90.0);
    let o_p = Orientation::new(0.0, phi_p, orientation.theta()).ok()?;
    let o_m = Orientation::new(0.0, phi_m, orientation.theta()).ok()?;
    let sp = eta_gamma_at(mat, &o_p, options.stencil_step, hint).ok();
    let sm = eta_gamma_at(mat, &o_m, options.stencil_step, hint).ok();
    let (sens_eta, sens_gamma) = match (sp, sm) {
        (Some(p), Some(m)) => (
            ((p.eta_deg - m.eta_deg) / (phi_p - phi_m)).abs(),
            ((p.gamma - m.gamma) / (phi_p - phi_m)).abs(),
        ),
        _ => (f64::NAN, f64::NAN),
    };

    let full = coupling_k2(mat, &orientation).ok()?;

    Some(MDCandidate {
        orientation,
        eta_residual: eta,
        gamma_value: gamma,
        sens_eta,
        sens_gamma,
        velocity,
        polarization: full.polarization,
        k2: full.k2,
        converged,
        iterations,
    })
}

/// Bilinear velocity hint from the coarse map, if the surrounding samples
/// exist.
fn interpolate_hint(map: &ParameterMap, phi: f64, theta: f64) -> Option<f64> {
    let ip = map
        .phi_values
        .iter()
        .position(|&p| (p - phi).abs() <= map.phi_step.max(1e-9))?;
    let it = map
        .theta_values
        .iter()
        .position(|&t| (t - theta).abs() <= map.theta_step)?;
    map.rows[ip].points[it].v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::map::{map_parameter_space, MapOptions};
    use crate::materials::Handedness;
    use nalgebra::{Matrix3, Matrix3x6, Matrix6, Vector3};

    fn isotropic_material() -> MaterialConstants {
        let (c11, c44) = (110.5e9, 26.1e9);
        let c12 = c11 - 2.0 * c44;
        let mut elastic = Matrix6::zeros();
        for i in 0..3 {
            for j in 0..3 {
                elastic[(i, j)] = if i == j { c11 } else { c12 };
            }
            elastic[(3 + i, 3 + i)] = c44;
        }
        MaterialConstants {
            name: "iso".into(),
            density: 2700.0,
            elastic,
            piezo: Matrix3x6::zeros(),
            permittivity: Matrix3::from_diagonal(&Vector3::from_element(
                crate::VACUUM_PERMITTIVITY,
            )),
            handedness: Handedness::Right,
            temperature_label: String::new(),
            symmetry_class: "iso".into(),
        }
    }

    #[test]
    fn isotropic_material_has_no_md_orientations() {
        let mat = isotropic_material();
        let map = map_parameter_space(
            &mat,
            (-10.0, 10.0),
            (0.0, 20.0),
            1.0,
            &MapOptions {
                with_k2: false,
                cache_dir: None,
            },
        )
        .unwrap();
        let found = find_md_orientations(&mat, &map, &FindMdOptions::default()).unwrap();
        assert!(found.is_empty(), "gamma = 0 everywhere cannot cross -1");
    }
}
