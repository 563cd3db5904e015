//! Boundary-determinant root search over velocity.
//!
//! The determinant of the normalized boundary matrix vanishes at a surface
//! wave. The search scans velocity below the slowest bulk ceiling for local
//! minima of |det|, refines each bracket (sign-projected bisection with a
//! golden-section fallback) and accepts only dips that reach the absolute
//! zero threshold — shallow minima belong to leaky branches and are not
//! surface waves. A geometric fine pass toward the transonic edge picks up
//! piezoelectrically trapped shear branches that sit within fractions of a
//! m/s of the bulk cutoff.

use num_complex::Complex64;

use super::christoffel::HalfSpaceProblem;
use super::partial_wave::{trial_determinant, TrialDet, TrialFailure};
use super::{ElectricRow, SolverError};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Coarse scan step, m/s.
    pub scan_step: f64,
    /// Scan starts at this fraction of the bulk ceiling.
    pub scan_floor_frac: f64,
    /// Bisection bracket width target, m/s.
    pub bisect_tol: f64,
    /// Secant polish target, m/s; tightens derivatives well past bisect_tol.
    pub polish_tol: f64,
    /// Normalized |det| below which a refined dip counts as a root. True
    /// roots polish to 1e-11 or less; leaky-branch minima stay above 1e-6.
    pub accept_det: f64,
    /// Half-width of the scan window around a hint velocity, m/s.
    pub hint_halfwidth: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            scan_step: 1.0,
            scan_floor_frac: 0.5,
            bisect_tol: 1e-4,
            polish_tol: 1e-9,
            accept_det: 1e-8,
            hint_halfwidth: 60.0,
        }
    }
}

/// A refined surface-wave root.
pub struct RootCandidate {
    pub velocity: f64,
    pub trial: TrialDet,
    pub det_magnitude: f64,
}

struct ScanPoint {
    v: f64,
    det: Complex64,
    mag: f64,
    roots: Vec<Complex64>,
}

/// Find the slowest surface-wave velocity for one surface condition.
pub fn find_root(
    prob: &HalfSpaceProblem,
    row: ElectricRow,
    hint: Option<f64>,
    cfg: &SearchConfig,
) -> Result<RootCandidate, SolverError> {
    let ceiling = prob.bulk_ceiling;
    let full_lo = cfg.scan_floor_frac * ceiling;
    let full_hi = ceiling - 1e-4;

    if let Some(h) = hint {
        let lo = (h - cfg.hint_halfwidth).max(full_lo);
        let hi = (h + cfg.hint_halfwidth).min(full_hi);
        if hi > lo {
            if let Ok(root) = scan_and_refine(prob, row, lo, hi, cfg.scan_step, cfg) {
                return Ok(root);
            }
        }
    }

    match scan_and_refine(prob, row, full_lo, full_hi, cfg.scan_step, cfg) {
        Ok(root) => Ok(root),
        Err(first_err) => {
            near_cutoff_pass(prob, row, full_lo, full_hi, cfg).ok_or(first_err)
        }
    }
}

/// Geometrically refined scan toward the transonic edge. The edge is located
/// empirically (trials turn non-subsonic), then ever finer steps approach it.
fn near_cutoff_pass(
    prob: &HalfSpaceProblem,
    row: ElectricRow,
    lo: f64,
    hi: f64,
    cfg: &SearchConfig,
) -> Option<RootCandidate> {
    // Locate the last subsonic velocity by bisection on trial validity.
    let mut a = lo;
    let mut b = hi + 1e-4;
    trial_determinant(prob, a, row, None).ok()?;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        match trial_determinant(prob, mid, row, None) {
            Ok(_) => a = mid,
            Err(_) => b = mid,
        }
        if b - a < 1e-6 {
            break;
        }
    }
    let edge = a;
    for step in [0.1, 0.01, 1e-3, 1e-4] {
        let span = 40.0 * step;
        let start = (edge - span).max(lo);
        if let Ok(root) = scan_and_refine(prob, row, start, edge, step, cfg) {
            return Some(root);
        }
    }
    None
}

fn scan_and_refine(
    prob: &HalfSpaceProblem,
    row: ElectricRow,
    lo: f64,
    hi: f64,
    step: f64,
    cfg: &SearchConfig,
) -> Result<RootCandidate, SolverError> {
    let mut points: Vec<ScanPoint> = Vec::with_capacity(((hi - lo) / step) as usize + 2);
    let mut warm: Option<Vec<Complex64>> = None;
    let mut v = lo;
    while v < hi {
        match trial_determinant(prob, v, row, warm.as_deref()) {
            Ok(t) => {
                warm = Some(t.all_roots.clone());
                points.push(ScanPoint {
                    v,
                    det: t.det,
                    mag: t.det.norm(),
                    roots: t.all_roots,
                });
            }
            Err(TrialFailure::NotSubsonic) => break,
            Err(_) => {}
        }
        v += step;
    }
    if points.len() < 3 {
        return Err(SolverError::NoSurfaceWave {
            scanned: (lo, hi),
            ceiling: prob.bulk_ceiling,
        });
    }

    for k in 1..points.len() - 1 {
        if points[k].mag <= points[k - 1].mag && points[k].mag <= points[k + 1].mag {
            if let Some(root) = refine_bracket(prob, row, &points[k - 1], &points[k + 1], cfg)
            {
                return Ok(root);
            }
        }
    }
    Err(SolverError::NoSurfaceWave {
        scanned: (lo, hi),
        ceiling: prob.bulk_ceiling,
    })
}

/// Refine one bracketed |det| minimum; `None` when the dip does not reach the
/// zero threshold (leaky-branch shadow rather than a root).
fn refine_bracket(
    prob: &HalfSpaceProblem,
    row: ElectricRow,
    left: &ScanPoint,
    right: &ScanPoint,
    cfg: &SearchConfig,
) -> Option<RootCandidate> {
    let dir = right.det - left.det;
    let warm = Some(left.roots.as_slice());

    let eval = |v: f64| -> Option<(Complex64, TrialDet)> {
        trial_determinant(prob, v, row, warm)
            .ok()
            .map(|t| (t.det, t))
    };
    let proj = |d: Complex64| (d * dir.conj()).re;

    let mut best: Option<(f64, TrialDet)> = None;
    if dir.norm() > 0.0 && proj(left.det) * proj(right.det) < 0.0 {
        // Sign-projected bisection.
        let (mut a, mut ua) = (left.v, proj(left.det));
        let mut b = right.v;
        let mut ok = true;
        while b - a > cfg.bisect_tol {
            let mid = 0.5 * (a + b);
            let Some((d, _)) = eval(mid) else {
                ok = false;
                break;
            };
            let um = proj(d);
            if ua * um <= 0.0 {
                b = mid;
            } else {
                a = mid;
                ua = um;
            }
        }
        if ok {
            // Secant polish inside the final bracket; keep the deepest point.
            if let (Some((d0, _)), Some((d1, t1))) = (eval(a), eval(b)) {
                let (mut u0, mut u1) = (proj(d0), proj(d1));
                let (mut v0, mut v1) = (a, b);
                let mut current = (v1, t1);
                for _ in 0..16 {
                    if (u1 - u0).abs() < f64::MIN_POSITIVE {
                        break;
                    }
                    let vn = (v1 - u1 * (v1 - v0) / (u1 - u0)).clamp(a, b);
                    let Some((dn, tn)) = eval(vn) else { break };
                    let un = proj(dn);
                    let done = (vn - v1).abs() < cfg.polish_tol;
                    if tn.det.norm() < current.1.det.norm() {
                        current = (vn, tn);
                    }
                    if done {
                        break;
                    }
                    v0 = v1;
                    u0 = u1;
                    v1 = vn;
                    u1 = un;
                }
                best = Some(current);
            }
        }
    }
    if best.is_none() {
        // Golden-section on |det| over the bracket; linear but phase-free.
        let golden = 0.618_033_988_749_894_9_f64;
        let (mut a, mut b) = (left.v, right.v);
        let mut x1 = b - golden * (b - a);
        let mut x2 = a + golden * (b - a);
        let (d1, mut t1) = eval(x1)?;
        let (d2, mut t2) = eval(x2)?;
        let (mut f1, mut f2) = (d1.norm(), d2.norm());
        let width_target = cfg.bisect_tol.min(1e-7);
        while b - a > width_target {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                t2 = t1;
                x1 = b - golden * (b - a);
                let (d, t) = eval(x1)?;
                f1 = d.norm();
                t1 = t;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                t1 = t2;
                x2 = a + golden * (b - a);
                let (d, t) = eval(x2)?;
                f2 = d.norm();
                t2 = t;
            }
        }
        best = Some(if f1 <= f2 { (x1, t1) } else { (x2, t2) });
    }

    let (v_star, trial) = best?;
    let mag = trial.det.norm();
    if mag < cfg.accept_det {
        Some(RootCandidate {
            velocity: v_star,
            det_magnitude: mag,
            trial,
        })
    } else {
        None
    }
}
