//! Dense (phi, theta) parameter-space maps with a resumable row cache.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{beam_steering, diffraction_parameter, ProfileError};
use crate::materials::{MaterialConstants, Orientation};
use crate::surface_wave::{coupling_k2_with, DirectionSolver, Polarization, Surface};

#[derive(Debug, Clone)]
pub struct MapOptions {
    /// Also run shorted solves for the coupling column.
    pub with_k2: bool,
    /// Cache directory for per-row chunks; rows found there are reused.
    pub cache_dir: Option<PathBuf>,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            with_k2: true,
            cache_dir: None,
        }
    }
}

/// One sampled direction. Missing fields mark directions where the solver
/// found no true surface wave (holes are reported, never interpolated).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MapPoint {
    pub theta: f64,
    pub v: Option<f64>,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub k2: Option<f64>,
    pub polarization: Option<Polarization>,
    /// Diagnostic for holes.
    pub failure: Option<String>,
}

/// All samples along theta for one cut angle.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MapRow {
    pub phi: f64,
    pub points: Vec<MapPoint>,
}

/// Dense grid of surface-wave properties over (phi, theta) at psi = 0.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ParameterMap {
    pub phi_values: Vec<f64>,
    pub theta_values: Vec<f64>,
    pub theta_step: f64,
    pub phi_step: f64,
    /// True when the theta range spans one full 180-degree period.
    pub theta_periodic: bool,
    pub rows: Vec<MapRow>,
}

impl ParameterMap {
    pub fn point(&self, i_phi: usize, i_theta: usize) -> &MapPoint {
        &self.rows[i_phi].points[i_theta]
    }

    /// Count of directions with no surface-wave solution.
    pub fn hole_count(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.points.iter())
            .filter(|p| p.v.is_none())
            .count()
    }
}

/// Sweep the (phi, theta) space on uniform grids.
///
/// `phi_range` and `theta_range` are inclusive starts with exclusive ends
/// for theta when the span equals the full 180-degree period. Rows are
/// evaluated in parallel; within a row the velocity search warm-starts from
/// the previous theta sample.
pub fn map_parameter_space(
    mat: &MaterialConstants,
    phi_range: (f64, f64),
    theta_range: (f64, f64),
    resolution_deg: f64,
    options: &MapOptions,
) -> Result<ParameterMap, ProfileError> {
    assert!(resolution_deg > 0.0);
    if resolution_deg > super::MAX_THETA_STEP_DEG {
        return Err(ProfileError::GridTooCoarse {
            step: resolution_deg,
            max: super::MAX_THETA_STEP_DEG,
        });
    }
    let (phi_lo, phi_hi) = phi_range;
    let (theta_lo, theta_hi) = theta_range;
    assert!(phi_hi >= phi_lo && theta_hi > theta_lo);

    let n_phi = ((phi_hi - phi_lo) / resolution_deg).round() as usize + 1;
    let theta_span = theta_hi - theta_lo;
    let theta_periodic = (theta_span - 180.0).abs() < 1e-9;
    let n_theta = if theta_periodic {
        (180.0 / resolution_deg).round() as usize
    } else {
        (theta_span / resolution_deg).round() as usize + 1
    };
    let phi_values: Vec<f64> = (0..n_phi)
        .map(|i| phi_lo + i as f64 * resolution_deg)
        .collect();
    let theta_values: Vec<f64> = (0..n_theta)
        .map(|i| theta_lo + i as f64 * resolution_deg)
        .collect();

    let cache_key = options
        .cache_dir
        .as_ref()
        .map(|dir| (dir.clone(), map_cache_key(mat, theta_range, resolution_deg, options.with_k2)));

    let rows: Vec<MapRow> = phi_values
        .par_iter()
        .map(|&phi| {
            if let Some((dir, key)) = &cache_key {
                if let Some(row) = load_cached_row(dir, key, phi, n_theta) {
                    return row;
                }
            }
            let row = compute_row(mat, phi, &theta_values, resolution_deg, theta_periodic, options);
            if let Some((dir, key)) = &cache_key {
                store_cached_row(dir, key, &row);
            }
            row
        })
        .collect();

    Ok(ParameterMap {
        phi_values,
        theta_values,
        theta_step: resolution_deg,
        phi_step: if n_phi > 1 { resolution_deg } else { 0.0 },
        theta_periodic,
        rows,
    })
}

fn compute_row(
    mat: &MaterialConstants,
    phi: f64,
    theta_values: &[f64],
    step: f64,
    periodic: bool,
    options: &MapOptions,
) -> MapRow {
    let n = theta_values.len();
    let mut velocities: Vec<Option<f64>> = vec![None; n];
    let mut k2: Vec<Option<f64>> = vec![None; n];
    let mut pol: Vec<Option<Polarization>> = vec![None; n];
    let mut failures: Vec<Option<String>> = vec![None; n];

    let mut hint: Option<f64> = None;
    for (i, &theta) in theta_values.iter().enumerate() {
        let orientation = match Orientation::new(0.0, phi, theta) {
            Ok(o) => o,
            Err(e) => {
                failures[i] = Some(e.to_string());
                continue;
            }
        };
        let solver = DirectionSolver::new(mat, &orientation);
        if options.with_k2 {
            match coupling_k2_with(&solver, &orientation, hint) {
                Ok(sol) => {
                    velocities[i] = Some(sol.v_free);
                    k2[i] = Some(sol.k2);
                    pol[i] = Some(sol.polarization);
                    hint = Some(sol.v_free);
                }
                Err(e) => {
                    failures[i] = Some(e.to_string());
                    hint = None;
                }
            }
        } else {
            match solver.solve(Surface::Free, hint) {
                Ok(mode) => {
                    velocities[i] = Some(mode.velocity);
                    pol[i] = Some(mode.polarization());
                    hint = Some(mode.velocity);
                }
                Err(e) => {
                    failures[i] = Some(e.to_string());
                    hint = None;
                }
            }
        }
    }

    let (eta, gamma) = differentiate_with_holes(&velocities, step, periodic);

    let points = (0..n)
        .map(|i| MapPoint {
            theta: theta_values[i],
            v: velocities[i],
            eta: eta[i],
            gamma: gamma[i],
            k2: k2[i],
            polarization: pol[i],
            failure: failures[i].take(),
        })
        .collect();
    MapRow { phi, points }
}

/// Differentiate a velocity row that may contain holes. A sample gets eta
/// only if its full five-point window is present, and gamma only if the
/// five-point eta window is present; nothing is interpolated across holes.
fn differentiate_with_holes(
    v: &[Option<f64>],
    step: f64,
    periodic: bool,
) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let n = v.len();
    if n < 5 {
        return (vec![None; n], vec![None; n]);
    }
    if v.iter().all(|x| x.is_some()) {
        let dense: Vec<f64> = v.iter().map(|x| x.unwrap()).collect();
        let eta = beam_steering(&dense, step, periodic);
        let gamma = diffraction_parameter(&eta, step, periodic);
        return (
            eta.into_iter().map(Some).collect(),
            gamma.into_iter().map(Some).collect(),
        );
    }

    let window_ok = |center: usize, data: &[Option<f64>]| -> Option<[f64; 5]> {
        let mut out = [0.0; 5];
        for (j, slot) in out.iter_mut().enumerate() {
            let off = j as isize - 2;
            let idx = center as isize + off;
            let idx = if periodic {
                idx.rem_euclid(n as isize) as usize
            } else if idx < 0 || idx >= n as isize {
                return None;
            } else {
                idx as usize
            };
            *slot = data[idx]?;
        }
        Some(out)
    };

    let mut eta: Vec<Option<f64>> = vec![None; n];
    for i in 0..n {
        if v[i].is_none() {
            continue;
        }
        if let Some(w) = window_ok(i, v) {
            let (d1, _) = crate::math::stencil::center_derivatives(&w, step);
            let r = 180.0 / std::f64::consts::PI;
            eta[i] = Some(((d1 * r) / w[2]).atan().to_degrees());
        }
    }
    let mut gamma: Vec<Option<f64>> = vec![None; n];
    for i in 0..n {
        if eta[i].is_none() {
            continue;
        }
        if let Some(w) = window_ok(i, &eta) {
            let (d1, _) = crate::math::stencil::center_derivatives(&w, step);
            gamma[i] = Some(d1);
        }
    }
    (eta, gamma)
}

fn map_cache_key(
    mat: &MaterialConstants,
    theta_range: (f64, f64),
    resolution: f64,
    with_k2: bool,
) -> String {
    let mut h = Sha256::new();
    h.update(mat.canonical_bytes());
    h.update(theta_range.0.to_le_bytes());
    h.update(theta_range.1.to_le_bytes());
    h.update(resolution.to_le_bytes());
    h.update([with_k2 as u8]);
    let digest = h.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn row_path(dir: &Path, key: &str, phi: f64) -> PathBuf {
    // Milli-degree naming keeps filenames exact for fractional grids.
    let milli = (phi * 1000.0).round() as i64;
    dir.join(format!("{key}_phi{milli}.json"))
}

fn load_cached_row(dir: &Path, key: &str, phi: f64, expect_len: usize) -> Option<MapRow> {
    let text = std::fs::read_to_string(row_path(dir, key, phi)).ok()?;
    let row: MapRow = serde_json::from_str(&text).ok()?;
    (row.points.len() == expect_len && (row.phi - phi).abs() < 1e-9).then_some(row)
}

fn store_cached_row(dir: &Path, key: &str, row: &MapRow) {
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    if let Ok(text) = serde_json::to_string(row) {
        // Best effort: a failed cache write only costs recomputation.
        let _ = std::fs::write(row_path(dir, key, row.phi), text);
    }
}

/// Serialize a map as CSV with one line per grid point. Missing values are
/// left empty; `failure` carries the hole diagnostic.
pub fn map_to_csv(map: &ParameterMap) -> String {
    let mut out = String::from("phi_deg,theta_deg,v_mps,eta_deg,gamma,k2_percent,polarization\n");
    for row in &map.rows {
        for p in &row.points {
            let fmt = |x: Option<f64>, scale: f64| {
                x.map(|v| format!("{:.9}", v * scale)).unwrap_or_default()
            };
            out.push_str(&format!(
                "{:.4},{:.4},{},{},{},{},{}\n",
                row.phi,
                p.theta,
                fmt(p.v, 1.0),
                fmt(p.eta, 1.0),
                fmt(p.gamma, 1.0),
                fmt(p.k2, 100.0),
                p.polarization.map(|q| q.label()).unwrap_or_default(),
            ));
        }
    }
    out
}
