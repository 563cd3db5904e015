//! Velocity profiles feeding the angular-spectrum integral.

use crate::anisotropy::ProfileError;
use crate::materials::{MaterialConstants, Orientation};
use crate::math::interp::UniformCubic;
use crate::surface_wave::{DirectionSolver, Surface};

/// Phase velocity as a function of absolute propagation angle (degrees).
pub trait VelocityProfile: Send + Sync {
    fn velocity(&self, theta_deg: f64) -> f64;
    /// Covered angular range; infinite for closed-form profiles.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Ideal minimally-diffracting profile v = v0 cos(theta - theta_ref).
#[derive(Debug, Clone, Copy)]
pub struct CosineProfile {
    pub v0: f64,
    pub theta_ref_deg: f64,
}

impl VelocityProfile for CosineProfile {
    fn velocity(&self, theta_deg: f64) -> f64 {
        self.v0 * (theta_deg - self.theta_ref_deg).to_radians().cos()
    }
}

/// Constant-velocity (isotropic) profile.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicProfile {
    pub v0: f64,
}

impl VelocityProfile for IsotropicProfile {
    fn velocity(&self, _theta_deg: f64) -> f64 {
        self.v0
    }
}

/// Arbitrary closed-form profile.
pub struct FnProfile<F: Fn(f64) -> f64 + Send + Sync>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> VelocityProfile for FnProfile<F> {
    fn velocity(&self, theta_deg: f64) -> f64 {
        (self.0)(theta_deg)
    }
}

/// Cubic interpolation of uniformly sampled velocities.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    interp: UniformCubic,
}

impl SampledProfile {
    pub fn new(theta0_deg: f64, step_deg: f64, samples: Vec<f64>) -> Self {
        Self {
            interp: UniformCubic::new(theta0_deg, step_deg, samples),
        }
    }

    /// Sample the free-surface velocity over `[theta_lo, theta_hi]` with the
    /// half-space solver. Fails on any hole: diffraction profiles must be
    /// complete over the spectral window.
    pub fn from_solver(
        mat: &MaterialConstants,
        phi: f64,
        theta_lo: f64,
        theta_hi: f64,
        step_deg: f64,
    ) -> Result<Self, ProfileError> {
        assert!(theta_hi > theta_lo && step_deg > 0.0);
        let n = ((theta_hi - theta_lo) / step_deg).round() as usize + 1;
        let mut samples = Vec::with_capacity(n);
        let mut hint = None;
        for i in 0..n {
            let theta = theta_lo + i as f64 * step_deg;
            let orientation = Orientation::new(0.0, phi, theta)?;
            let mode = DirectionSolver::new(mat, &orientation).solve(Surface::Free, hint)?;
            hint = Some(mode.velocity);
            samples.push(mode.velocity);
        }
        Ok(Self::new(theta_lo, step_deg, samples))
    }

    /// Mirror image about `theta_ref`: v'(theta) = v(2 theta_ref - theta).
    pub fn mirrored_about(&self, theta_ref: f64) -> MirroredProfile<SampledProfile> {
        MirroredProfile {
            inner: self.clone(),
            theta_ref,
        }
    }
}

impl VelocityProfile for SampledProfile {
    fn velocity(&self, theta_deg: f64) -> f64 {
        self.interp.eval(theta_deg)
    }

    fn domain(&self) -> (f64, f64) {
        (self.interp.x_min(), self.interp.x_max())
    }
}

/// Reflection of another profile about a reference angle.
pub struct MirroredProfile<P: VelocityProfile> {
    pub inner: P,
    pub theta_ref: f64,
}

impl<P: VelocityProfile> VelocityProfile for MirroredProfile<P> {
    fn velocity(&self, theta_deg: f64) -> f64 {
        self.inner.velocity(2.0 * self.theta_ref - theta_deg)
    }

    fn domain(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.domain();
        (2.0 * self.theta_ref - hi, 2.0 * self.theta_ref - lo)
    }
}
