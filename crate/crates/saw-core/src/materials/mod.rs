//! Crystal material constants and device-frame orientation handling.
//!
//! Material tensors live in the crystallographic frame until rotated into a
//! device frame with [`rotate_tensors`]. The Euler convention is the
//! IEEE-style (Z, X', Z'') triple: rotate about the crystal Z axis by psi,
//! about the new X axis by phi, then about the resulting Z (wafer normal)
//! by theta. Angles are degrees everywhere.

mod file;
mod rotation;
pub mod voigt;

pub use file::load_material;
pub use rotation::{bond_matrix, device_frame, rotate_tensors};

use nalgebra::{Matrix3, Matrix3x6, Matrix6};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("failed to read material file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to parse material file {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid material constant: {0}")]
    Invariant(String),
    #[error("orientation angle out of range: {0}")]
    Orientation(String),
}

/// Right- or left-handed variant of enantiomorphic crystals (alpha quartz).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
}

/// Full set of constants describing a piezoelectric crystal in some frame.
///
/// `elastic` is the 6x6 Voigt stiffness in Pa, `piezo` the 3x6 Voigt
/// piezoelectric stress constants in C/m^2, `permittivity` the clamped
/// (constant-strain) dielectric tensor in F/m.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialConstants {
    pub name: String,
    pub density: f64,
    pub elastic: Matrix6<f64>,
    pub piezo: Matrix3x6<f64>,
    pub permittivity: Matrix3<f64>,
    pub handedness: Handedness,
    pub temperature_label: String,
    /// Declared symmetry class from the input file; validation is strict for
    /// "32" and advisory otherwise.
    pub symmetry_class: String,
}

impl MaterialConstants {
    /// Check all structural invariants, returning the first violation.
    pub fn validate(&self) -> Result<(), MaterialError> {
        if !(self.density > 0.0) {
            return Err(MaterialError::Invariant(format!(
                "density must be positive, got {}",
                self.density
            )));
        }
        check_symmetric6(&self.elastic, "elastic")?;
        check_symmetric3(&self.permittivity, "permittivity")?;
        check_positive_definite6(&self.elastic, "elastic")?;
        check_positive_definite3(&self.permittivity, "permittivity")?;
        if self.symmetry_class.trim() == "32" {
            self.check_class32_pattern()?;
        }
        Ok(())
    }

    /// Trigonal class-32 independent-constant pattern, enforced to 0.1%
    /// relative of the dominant constant in each tensor.
    fn check_class32_pattern(&self) -> Result<(), MaterialError> {
        let c = &self.elastic;
        let c_scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let c_tol = 1e-3 * c_scale;
        let expect_c = |i: usize, j: usize, v: f64, what: &str| -> Result<(), MaterialError> {
            if (c[(i, j)] - v).abs() > c_tol {
                Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: c{}{} = {:.6e}, expected {} = {:.6e}",
                    i + 1,
                    j + 1,
                    c[(i, j)],
                    what,
                    v
                )))
            } else {
                Ok(())
            }
        };
        expect_c(1, 1, c[(0, 0)], "c11")?;
        expect_c(1, 2, c[(0, 2)], "c13")?;
        expect_c(1, 3, -c[(0, 3)], "-c14")?;
        expect_c(4, 4, c[(3, 3)], "c44")?;
        expect_c(4, 5, c[(0, 3)], "c14")?;
        expect_c(5, 5, (c[(0, 0)] - c[(0, 1)]) / 2.0, "(c11-c12)/2")?;
        for &(i, j) in &[
            (0, 4),
            (0, 5),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 4),
        ] {
            if c[(i, j)].abs() > c_tol {
                return Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: c{}{} = {:.6e}, expected 0",
                    i + 1,
                    j + 1,
                    c[(i, j)]
                )));
            }
        }
        let e = &self.piezo;
        let e_scale = e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let e_tol = 1e-3 * e_scale.max(1e-12);
        let expect_e = |i: usize, j: usize, v: f64, what: &str| -> Result<(), MaterialError> {
            if (e[(i, j)] - v).abs() > e_tol {
                Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: e{}{} = {:.6e}, expected {} = {:.6e}",
                    i + 1,
                    j + 1,
                    e[(i, j)],
                    what,
                    v
                )))
            } else {
                Ok(())
            }
        };
        expect_e(0, 1, -e[(0, 0)], "-e11")?;
        expect_e(1, 4, -e[(0, 3)], "-e14")?;
        expect_e(1, 5, -e[(0, 0)], "-e11")?;
        for &(i, j) in &[(0, 2), (0, 4), (0, 5), (1, 0), (1, 1), (1, 2), (1, 3)] {
            if e[(i, j)].abs() > e_tol {
                return Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: e{}{} = {:.6e}, expected 0",
                    i + 1,
                    j + 1,
                    e[(i, j)]
                )));
            }
        }
        for j in 0..6 {
            if e[(2, j)].abs() > e_tol {
                return Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: e3{} = {:.6e}, expected 0",
                    j + 1,
                    e[(2, j)]
                )));
            }
        }
        let p = &self.permittivity;
        let p_scale = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let p_tol = 1e-3 * p_scale;
        if (p[(0, 0)] - p[(1, 1)]).abs() > p_tol {
            return Err(MaterialError::Invariant(
                "class-32 pattern violated: eps11 != eps22".into(),
            ));
        }
        for &(i, j) in &[(0, 1), (0, 2), (1, 2)] {
            if p[(i, j)].abs() > p_tol {
                return Err(MaterialError::Invariant(format!(
                    "class-32 pattern violated: eps{}{} nonzero",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// True when every piezoelectric constant is exactly zero.
    pub fn is_non_piezoelectric(&self) -> bool {
        self.piezo.iter().all(|&v| v == 0.0)
    }

    /// Stable byte serialization used for cache keys and manifests.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(self.name.as_bytes());
        out.push(0);
        out.extend_from_slice(&self.density.to_le_bytes());
        for v in self.elastic.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in self.piezo.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in self.permittivity.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }
}

fn check_symmetric6(m: &Matrix6<f64>, what: &str) -> Result<(), MaterialError> {
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for i in 0..6 {
        for j in (i + 1)..6 {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-9 * scale {
                return Err(MaterialError::Invariant(format!(
                    "{what} matrix not symmetric at ({},{}): {} vs {}",
                    i + 1,
                    j + 1,
                    m[(i, j)],
                    m[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

fn check_symmetric3(m: &Matrix3<f64>, what: &str) -> Result<(), MaterialError> {
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-9 * scale {
                return Err(MaterialError::Invariant(format!(
                    "{what} tensor not symmetric at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn check_positive_definite6(m: &Matrix6<f64>, what: &str) -> Result<(), MaterialError> {
    let sym = (m + m.transpose()) * 0.5;
    if sym.cholesky().is_none() {
        return Err(MaterialError::Invariant(format!(
            "{what} matrix is not positive definite"
        )));
    }
    Ok(())
}

fn check_positive_definite3(m: &Matrix3<f64>, what: &str) -> Result<(), MaterialError> {
    let sym = (m + m.transpose()) * 0.5;
    if sym.cholesky().is_none() {
        return Err(MaterialError::Invariant(format!(
            "{what} tensor is not positive definite"
        )));
    }
    Ok(())
}

/// Euler-angle triple locating a device frame relative to crystal axes.
///
/// Canonical ranges: psi and phi in [-90, 90] degrees, theta reduced
/// modulo 180 into [0, 180).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Orientation {
    psi: f64,
    phi: f64,
    theta: f64,
}

impl Orientation {
    pub fn new(psi: f64, phi: f64, theta: f64) -> Result<Self, MaterialError> {
        if !psi.is_finite() || !phi.is_finite() || !theta.is_finite() {
            return Err(MaterialError::Orientation(
                "angles must be finite".to_string(),
            ));
        }
        if !(-90.0..=90.0).contains(&psi) {
            return Err(MaterialError::Orientation(format!(
                "psi = {psi} outside [-90, 90]"
            )));
        }
        if !(-90.0..=90.0).contains(&phi) {
            return Err(MaterialError::Orientation(format!(
                "phi = {phi} outside [-90, 90]"
            )));
        }
        Ok(Self {
            psi,
            phi,
            theta: canonical_theta(theta),
        })
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same cut rotated in plane to a new theta.
    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            psi: self.psi,
            phi: self.phi,
            theta: canonical_theta(theta),
        }
    }
}

fn canonical_theta(theta: f64) -> f64 {
    let mut t = theta % 180.0;
    if t < 0.0 {
        t += 180.0;
    }
    if t >= 180.0 {
        t = 0.0;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_canonicalization() {
        let o = Orientation::new(0.0, 10.0, 270.0).unwrap();
        assert_eq!(o.theta(), 90.0);
        let o = Orientation::new(0.0, 10.0, -30.0).unwrap();
        assert_eq!(o.theta(), 150.0);
        let o = Orientation::new(0.0, 10.0, 180.0).unwrap();
        assert_eq!(o.theta(), 0.0);
    }

    #[test]
    fn rejects_out_of_range_phi() {
        assert!(Orientation::new(0.0, 120.0, 0.0).is_err());
        assert!(Orientation::new(95.0, 0.0, 0.0).is_err());
        assert!(Orientation::new(0.0, f64::NAN, 0.0).is_err());
    }
}
