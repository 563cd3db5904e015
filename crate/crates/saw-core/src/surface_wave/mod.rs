//! Surface-acoustic-wave solutions on a piezoelectric half-space.
//!
//! The solver assembles the coupled elastodynamic and quasi-static electric
//! plane-wave problem for partial waves decaying into the substrate, forms
//! the 4x4 boundary-condition matrix (three traction-free rows plus an
//! electrical row) and locates velocities where its determinant vanishes.
//! Surface waves are scale invariant on a half-space, so no frequency enters.

pub mod christoffel;
pub mod partial_wave;
pub mod search;

use num_complex::Complex64;
use thiserror::Error;

use crate::materials::{rotate_tensors, MaterialConstants, MaterialError, Orientation};
use christoffel::HalfSpaceProblem;
use partial_wave::mode_weights;
use search::{find_root, SearchConfig};

/// Electrical condition on the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    /// Electrically open surface.
    Free,
    /// Idealized massless metal at zero potential.
    Shorted,
}

/// Electrical idealization of the free surface.
///
/// `ChargeFree` imposes vanishing normal electric displacement at the
/// surface; `VacuumCoupled` matches the interior potential to a decaying
/// vacuum Laplace solution. Charge-free is the default: it is the condition
/// behind the reference coupling values this crate is validated against, and
/// the two differ only at the level of the (small) coupling coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeElectricCondition {
    ChargeFree,
    VacuumCoupled,
}

impl Default for FreeElectricCondition {
    fn default() -> Self {
        FreeElectricCondition::ChargeFree
    }
}

/// The electrical boundary row actually assembled by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectricRow {
    ChargeFree,
    VacuumCoupled,
    Grounded,
}

/// Dominant character of the surface displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Polarization {
    Rayleigh,
    ShearHorizontal,
    Other,
}

impl Polarization {
    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Rayleigh => "R",
            Polarization::ShearHorizontal => "SH",
            Polarization::Other => "other",
        }
    }
}

/// Sagittal power fraction at or above which a mode counts as Rayleigh.
pub const RAYLEIGH_SAGITTAL_MIN: f64 = 2.0 / 3.0;
/// Sagittal power fraction at or below which a mode counts as SH.
pub const SH_SAGITTAL_MAX: f64 = 1.0 / 3.0;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(
        "no surface wave: boundary determinant has no root in {scanned:?} m/s \
         (bulk ceiling {ceiling:.1} m/s)"
    )]
    NoSurfaceWave { scanned: (f64, f64), ceiling: f64 },
    #[error("degenerate partial-wave branches at v = {velocity} m/s: {detail}")]
    DegenerateRoots { velocity: f64, detail: String },
    #[error("solver inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

/// One converged solve for a single surface condition.
#[derive(Debug, Clone)]
pub struct SawMode {
    pub velocity: f64,
    pub surface: Surface,
    /// Surface displacement amplitudes (u1, u2, u3), arbitrary common scale.
    pub displacement: [Complex64; 3],
    /// Surface electric potential amplitude, same scale.
    pub potential: Complex64,
    /// Fraction of |u|^2 in the sagittal (x1, x3) plane.
    pub sagittal_fraction: f64,
    /// Normalized boundary-determinant magnitude at the root.
    pub det_residual: f64,
    /// Decay exponents of the four partial waves.
    pub decay_exponents: [Complex64; 4],
}

impl SawMode {
    pub fn polarization(&self) -> Polarization {
        classify_sagittal_fraction(self.sagittal_fraction)
    }
}

/// Complete free/shorted pair with coupling for one propagation direction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SurfaceWaveSolution {
    pub v_free: f64,
    pub v_shorted: f64,
    /// Electromechanical coupling 2(v_f - v_s)/v_f, dimensionless.
    pub k2: f64,
    pub polarization: Polarization,
    pub sagittal_fraction: f64,
    pub direction: Orientation,
}

/// Reusable solver for one material and orientation.
pub struct DirectionSolver {
    problem: HalfSpaceProblem,
    config: SearchConfig,
    free_condition: FreeElectricCondition,
}

impl DirectionSolver {
    pub fn new(mat: &MaterialConstants, orientation: &Orientation) -> Self {
        let device = rotate_tensors(mat, orientation);
        Self {
            problem: HalfSpaceProblem::new(&device),
            config: SearchConfig::default(),
            free_condition: FreeElectricCondition::default(),
        }
    }

    pub fn with_config(mut self, config: SearchConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_free_condition(mut self, cond: FreeElectricCondition) -> Self {
        self.free_condition = cond;
        self
    }

    pub fn bulk_ceiling(&self) -> f64 {
        self.problem.bulk_ceiling
    }

    fn electric_row(&self, surface: Surface) -> ElectricRow {
        match (surface, self.free_condition) {
            (Surface::Free, FreeElectricCondition::ChargeFree) => ElectricRow::ChargeFree,
            (Surface::Free, FreeElectricCondition::VacuumCoupled) => ElectricRow::VacuumCoupled,
            (Surface::Shorted, _) => ElectricRow::Grounded,
        }
    }

    /// Slowest true surface wave for the given surface condition.
    ///
    /// `hint` narrows the velocity scan around a previous nearby solution;
    /// the full scan is the fallback whenever the window comes up empty.
    pub fn solve(&self, surface: Surface, hint: Option<f64>) -> Result<SawMode, SolverError> {
        let row = self.electric_row(surface);
        let root = find_root(&self.problem, row, hint, &self.config)?;
        let weights = mode_weights(&self.problem, &root.trial.waves, row).ok_or(
            SolverError::DegenerateRoots {
                velocity: root.velocity,
                detail: "boundary matrix null space not one-dimensional".to_string(),
            },
        )?;
        let mut displacement = [Complex64::new(0.0, 0.0); 3];
        let mut potential = Complex64::new(0.0, 0.0);
        for (w, wave) in weights.iter().zip(root.trial.waves.iter()) {
            for i in 0..3 {
                displacement[i] += w * wave.amplitude[i];
            }
            potential += w * wave.amplitude[3];
        }
        let total: f64 = displacement.iter().map(|u| u.norm_sqr()).sum();
        let sagittal = if total > 0.0 {
            (displacement[0].norm_sqr() + displacement[2].norm_sqr()) / total
        } else {
            0.0
        };
        let mut decay = [Complex64::new(0.0, 0.0); 4];
        for (slot, wave) in decay.iter_mut().zip(root.trial.waves.iter()) {
            *slot = wave.alpha;
        }
        Ok(SawMode {
            velocity: root.velocity,
            surface,
            displacement,
            potential,
            sagittal_fraction: sagittal,
            det_residual: root.det_magnitude,
            decay_exponents: decay,
        })
    }
}

/// Slowest surface wave on `mat` cut and rotated per `o`.
pub fn saw_velocity(
    mat: &MaterialConstants,
    o: &Orientation,
    surface: Surface,
) -> Result<SawMode, SolverError> {
    DirectionSolver::new(mat, o).solve(surface, None)
}

/// Free and shorted solves combined into the coupling coefficient
/// k^2 = 2 (v_f - v_s) / v_f.
pub fn coupling_k2(
    mat: &MaterialConstants,
    o: &Orientation,
) -> Result<SurfaceWaveSolution, SolverError> {
    let solver = DirectionSolver::new(mat, o);
    coupling_k2_with(&solver, o, None)
}

/// Coupling solve reusing an existing [`DirectionSolver`] and velocity hint.
pub fn coupling_k2_with(
    solver: &DirectionSolver,
    o: &Orientation,
    hint: Option<f64>,
) -> Result<SurfaceWaveSolution, SolverError> {
    let free = solver.solve(Surface::Free, hint)?;
    // Shorting a non-piezoelectric surface is electrically inert, so the
    // velocities coincide identically and k^2 is exactly zero.
    let (v_shorted, k2) = if solver.problem.e.iter().flatten().flatten().all(|&v| v == 0.0) {
        (free.velocity, 0.0)
    } else {
        let shorted = solver.solve(Surface::Shorted, Some(free.velocity))?;
        if shorted.velocity > free.velocity + 1e-3 {
            return Err(SolverError::Inconsistent(format!(
                "shorted velocity {} exceeds free velocity {}",
                shorted.velocity, free.velocity
            )));
        }
        let k2 = (2.0 * (free.velocity - shorted.velocity) / free.velocity).max(0.0);
        (shorted.velocity, k2)
    };
    Ok(SurfaceWaveSolution {
        v_free: free.velocity,
        v_shorted,
        k2,
        polarization: free.polarization(),
        sagittal_fraction: free.sagittal_fraction,
        direction: *o,
    })
}

/// Classify a surface eigenvector by its sagittal displacement fraction.
pub fn classify_polarization(displacement: &[Complex64; 3]) -> Polarization {
    let total: f64 = displacement.iter().map(|u| u.norm_sqr()).sum();
    if total == 0.0 {
        return Polarization::Other;
    }
    let sagittal = (displacement[0].norm_sqr() + displacement[2].norm_sqr()) / total;
    classify_sagittal_fraction(sagittal)
}

fn classify_sagittal_fraction(sagittal: f64) -> Polarization {
    if sagittal >= RAYLEIGH_SAGITTAL_MIN {
        Polarization::Rayleigh
    } else if sagittal <= SH_SAGITTAL_MAX {
        Polarization::ShearHorizontal
    } else {
        Polarization::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Handedness;
    use nalgebra::{Matrix3, Matrix3x6, Matrix6, Vector3};

    pub(crate) fn isotropic_material(c11: f64, c44: f64, density: f64) -> MaterialConstants {
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
            density,
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

    /// Classical Rayleigh-wave velocity from the scalar secular equation,
    /// solved independently of the partial-wave machinery.
    pub(crate) fn rayleigh_velocity_oracle(c11: f64, c44: f64, density: f64) -> f64 {
        let vs = (c44 / density).sqrt();
        let vp = (c11 / density).sqrt();
        let kappa2 = (vs / vp).powi(2);
        // f(x) = x^6 - 8x^4 + 8(3 - 2 kappa^2) x^2 - 16 (1 - kappa^2), x = v/vs.
        let f = |x: f64| {
            let x2 = x * x;
            x2 * x2 * x2 - 8.0 * x2 * x2 + 8.0 * (3.0 - 2.0 * kappa2) * x2
                - 16.0 * (1.0 - kappa2)
        };
        let (mut lo, mut hi) = (0.1, 1.0 - 1e-12);
        assert!(f(lo) < 0.0 && f(hi) > 0.0, "Rayleigh root not bracketed");
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi) * vs
    }

    #[test]
    fn isotropic_free_velocity_matches_rayleigh_equation() {
        let (c11, c44, rho) = (110.5e9, 26.1e9, 2700.0);
        let mat = isotropic_material(c11, c44, rho);
        let o = Orientation::new(0.0, 0.0, 0.0).unwrap();
        let mode = saw_velocity(&mat, &o, Surface::Free).expect("rayleigh root");
        let oracle = rayleigh_velocity_oracle(c11, c44, rho);
        let rel = (mode.velocity - oracle).abs() / oracle;
        assert!(
            rel < 1e-4,
            "solver {} vs oracle {} (rel {rel:.2e})",
            mode.velocity,
            oracle
        );
        assert_eq!(mode.polarization(), Polarization::Rayleigh);
    }

    #[test]
    fn isotropic_direction_independence() {
        let mat = isotropic_material(110.5e9, 26.1e9, 2700.0);
        let a = saw_velocity(
            &mat,
            &Orientation::new(0.0, 33.0, 10.0).unwrap(),
            Surface::Free,
        )
        .unwrap();
        let b = saw_velocity(
            &mat,
            &Orientation::new(0.0, -61.0, 130.0).unwrap(),
            Surface::Free,
        )
        .unwrap();
        assert!((a.velocity - b.velocity).abs() < 1e-4);
    }

    #[test]
    fn zero_piezo_coupling_is_exactly_zero() {
        let mat = isotropic_material(110.5e9, 26.1e9, 2700.0);
        let o = Orientation::new(0.0, 10.0, 20.0).unwrap();
        let sol = coupling_k2(&mat, &o).unwrap();
        assert_eq!(sol.k2, 0.0);
        assert_eq!(sol.v_free, sol.v_shorted);
    }

    #[test]
    fn classify_thresholds() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(
            classify_polarization(&[c(1.0), c(0.0), c(0.5)]),
            Polarization::Rayleigh
        );
        assert_eq!(
            classify_polarization(&[c(0.1), c(1.0), c(0.1)]),
            Polarization::ShearHorizontal
        );
        assert_eq!(
            classify_polarization(&[c(0.8), c(1.0), c(0.0)]),
            Polarization::Other
        );
    }
}
