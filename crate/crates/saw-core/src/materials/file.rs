//! Material constant files.
//!
//! TOML with four sections. `[meta]` carries name, class, handedness,
//! temperature and density (kg/m^3). `[elastic]` lists the Voigt upper
//! triangle in GPa as `cIJ` keys, `[piezo]` lists `eIJ` in C/m^2 and
//! `[permittivity]` lists `epsIJ` relative to vacuum; omitted entries are
//! zero and the lower triangles are filled by symmetry.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix3, Matrix3x6, Matrix6};
use serde::Deserialize;

use super::{Handedness, MaterialConstants, MaterialError};

#[derive(Debug, Deserialize)]
struct RawFile {
    meta: RawMeta,
    #[serde(default)]
    elastic: BTreeMap<String, f64>,
    #[serde(default)]
    piezo: BTreeMap<String, f64>,
    #[serde(default)]
    permittivity: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
struct RawMeta {
    name: String,
    #[serde(default = "default_class")]
    class: String,
    #[serde(default = "default_handedness")]
    handedness: Handedness,
    #[serde(default)]
    temperature: String,
    density: f64,
}

fn default_class() -> String {
    "unknown".to_string()
}

fn default_handedness() -> Handedness {
    Handedness::Right
}

/// Load and validate a material file.
pub fn load_material(path: impl AsRef<Path>) -> Result<MaterialConstants, MaterialError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MaterialError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let raw: RawFile = toml::from_str(&text).map_err(|e| MaterialError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parse_err = |message: String| MaterialError::Parse {
        path: path.display().to_string(),
        message,
    };

    let mut elastic = Matrix6::zeros();
    for (key, value) in &raw.elastic {
        let (i, j) = parse_indices(key, 'c', 6, 6).map_err(&parse_err)?;
        elastic[(i, j)] = value * 1e9;
        elastic[(j, i)] = value * 1e9;
    }
    let mut piezo = Matrix3x6::zeros();
    for (key, value) in &raw.piezo {
        let (i, j) = parse_indices(key, 'e', 3, 6).map_err(&parse_err)?;
        piezo[(i, j)] = *value;
    }
    let mut permittivity = Matrix3::zeros();
    for (key, value) in &raw.permittivity {
        let (i, j) = parse_indices(key, 'p', 3, 3).map_err(&parse_err)?;
        let v = value * crate::VACUUM_PERMITTIVITY;
        permittivity[(i, j)] = v;
        permittivity[(j, i)] = v;
    }

    let mat = MaterialConstants {
        name: raw.meta.name,
        density: raw.meta.density,
        elastic,
        piezo,
        permittivity,
        handedness: raw.meta.handedness,
        temperature_label: raw.meta.temperature,
        symmetry_class: raw.meta.class,
    };
    mat.validate()?;
    Ok(mat)
}

/// Parse `cIJ` / `eIJ` / `epsIJ` style keys into zero-based indices.
fn parse_indices(
    key: &str,
    kind: char,
    max_i: usize,
    max_j: usize,
) -> Result<(usize, usize), String> {
    let digits: String = key.chars().filter(|c| c.is_ascii_digit()).collect();
    let prefix: String = key.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let expected_prefix = match kind {
        'c' => "c",
        'e' => "e",
        _ => "eps",
    };
    if prefix != expected_prefix || digits.len() != 2 {
        return Err(format!(
            "bad key '{key}': expected {expected_prefix}IJ with two digits"
        ));
    }
    let i = digits.as_bytes()[0] - b'0';
    let j = digits.as_bytes()[1] - b'0';
    if i == 0 || j == 0 || i as usize > max_i || j as usize > max_j {
        return Err(format!("key '{key}' indices out of range"));
    }
    let (i, j) = (i as usize - 1, j as usize - 1);
    if kind != 'e' && i > j {
        return Err(format!("key '{key}' must address the upper triangle"));
    }
    Ok((i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new()
            .suffix(".toml")
            .tempfile()
            .unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const GOOD: &str = r#"
[meta]
name = "quartz-test"
class = "32"
handedness = "right"
temperature = "293 K"
density = 2649.0

[elastic]
c11 = 86.74
c12 = 6.99
c13 = 11.91
c14 = -17.91
c22 = 86.74
c23 = 11.91
c24 = 17.91
c33 = 107.2
c44 = 57.94
c55 = 57.94
c56 = -17.91
c66 = 39.875

[piezo]
e11 = 0.171
e12 = -0.171
e14 = -0.0406
e25 = 0.0406
e26 = -0.171

[permittivity]
eps11 = 4.43
eps22 = 4.43
eps33 = 4.63
"#;

    #[test]
    fn loads_valid_class32_file() {
        let f = write_temp(GOOD);
        let m = load_material(f.path()).unwrap();
        assert_eq!(m.name, "quartz-test");
        assert_eq!(m.density, 2649.0);
        assert_eq!(m.elastic[(0, 0)], 86.74e9);
        assert_eq!(m.elastic[(3, 0)], -17.91e9);
        assert_eq!(m.piezo[(1, 4)], 0.0406);
        assert!((m.permittivity[(2, 2)] / crate::VACUUM_PERMITTIVITY - 4.63).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_density() {
        let bad = GOOD.replace("density = 2649.0", "density = 0.0");
        let f = write_temp(&bad);
        let err = load_material(f.path()).unwrap_err();
        assert!(matches!(err, MaterialError::Invariant(_)));
        assert!(err.to_string().contains("density"));
    }

    #[test]
    fn rejects_class32_pattern_violation() {
        // c23 far off the declared class-32 pattern (c23 must equal c13).
        let bad = GOOD.replace("c23 = 11.91", "c23 = 20.0");
        let f = write_temp(&bad);
        let err = load_material(f.path()).unwrap_err();
        assert!(matches!(err, MaterialError::Invariant(_)));
    }

    #[test]
    fn rejects_indefinite_elastic() {
        let bad = GOOD.replace("c11 = 86.74", "c11 = -86.74");
        let f = write_temp(&bad);
        assert!(load_material(f.path()).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_material("/nonexistent/nowhere.toml").unwrap_err();
        assert!(matches!(err, MaterialError::Io { .. }));
    }

    #[test]
    fn non_class32_is_advisory() {
        // Isotropic constants declared as class "iso" pass validation.
        let iso = r#"
[meta]
name = "iso-test"
class = "iso"
density = 2700.0

[elastic]
c11 = 110.5
c12 = 58.3
c13 = 58.3
c22 = 110.5
c23 = 58.3
c33 = 110.5
c44 = 26.1
c55 = 26.1
c66 = 26.1

[permittivity]
eps11 = 1.0
eps22 = 1.0
eps33 = 1.0
"#;
        let f = write_temp(iso);
        let m = load_material(f.path()).unwrap();
        assert!(m.is_non_piezoelectric());
    }
}
