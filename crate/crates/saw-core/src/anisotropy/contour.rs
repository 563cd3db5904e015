//! Marching-squares level curves on (phi, theta) grids with holes, and
//! segment-pair intersection for locating simultaneous zero crossings.

/// A contour segment in (phi, theta) degrees, tagged with its grid cell.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub cell: (usize, usize),
}

/// Extract the `level` contour of `field[i_phi][i_theta]` with linear edge
/// interpolation. Cells touching a hole are skipped. When `wrap_theta` is
/// set the last theta column connects back to the first (period boundary).
pub fn marching_squares(
    field: &[Vec<Option<f64>>],
    phi_values: &[f64],
    theta_values: &[f64],
    level: f64,
    wrap_theta: bool,
    theta_period: f64,
) -> Vec<Segment> {
    let n_phi = phi_values.len();
    let n_theta = theta_values.len();
    let mut segments = Vec::new();
    if n_phi < 2 || n_theta < 2 {
        return segments;
    }
    let n_theta_cells = if wrap_theta { n_theta } else { n_theta - 1 };

    for ip in 0..n_phi - 1 {
        for it in 0..n_theta_cells {
            let it1 = (it + 1) % n_theta;
            let (Some(f00), Some(f01), Some(f10), Some(f11)) = (
                field[ip][it],
                field[ip][it1],
                field[ip + 1][it],
                field[ip + 1][it1],
            ) else {
                continue;
            };
            let phi0 = phi_values[ip];
            let phi1 = phi_values[ip + 1];
            let th0 = theta_values[it];
            let th1 = if it + 1 == n_theta && wrap_theta {
                theta_values[0] + theta_period
            } else {
                theta_values[it1]
            };

            // Corner order: 1 = (phi0,th0), 2 = (phi0,th1), 4 = (phi1,th1),
            // 8 = (phi1,th0).
            let mut case = 0u8;
            if f00 > level {
                case |= 1;
            }
            if f01 > level {
                case |= 2;
            }
            if f11 > level {
                case |= 4;
            }
            if f10 > level {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }

            let lerp = |fa: f64, fb: f64, xa: f64, xb: f64| {
                let t = (level - fa) / (fb - fa);
                xa + t.clamp(0.0, 1.0) * (xb - xa)
            };
            // Edge midcrossings: top (phi0 row), right (th1 col), bottom
            // (phi1 row), left (th0 col).
            let top = || (phi0, lerp(f00, f01, th0, th1));
            let right = || (lerp(f01, f11, phi0, phi1), th1);
            let bottom = || (phi1, lerp(f10, f11, th0, th1));
            let left = || (lerp(f00, f10, phi0, phi1), th0);

            let mut push = |p: (f64, f64), q: (f64, f64)| {
                segments.push(Segment {
                    a: p,
                    b: q,
                    cell: (ip, it),
                });
            };
            match case {
                1 | 14 => push(top(), left()),
                2 | 13 => push(top(), right()),
                3 | 12 => push(left(), right()),
                4 | 11 => push(right(), bottom()),
                6 | 9 => push(top(), bottom()),
                7 | 8 => push(left(), bottom()),
                5 | 10 => {
                    // Saddle: disambiguate with the cell-center average.
                    let center = 0.25 * (f00 + f01 + f10 + f11);
                    let center_high = center > level;
                    if (case == 5) == center_high {
                        push(top(), right());
                        push(left(), bottom());
                    } else {
                        push(top(), left());
                        push(right(), bottom());
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segments
}

/// Intersection point of two segments, if any (2D parametric solve).
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Option<(f64, f64)> {
    let (x1, y1) = s1.a;
    let (x2, y2) = s1.b;
    let (x3, y3) = s2.a;
    let (x4, y4) = s2.b;
    let d = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3);
    if d.abs() < 1e-14 {
        return None;
    }
    let t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / d;
    let u = ((x3 - x1) * (y2 - y1) - (y3 - y1) * (x2 - x1)) / d;
    if !(-1e-9..=1.0 + 1e-9).contains(&t) || !(-1e-9..=1.0 + 1e-9).contains(&u) {
        return None;
    }
    Some((x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
}

/// All intersections between two contour families. Segments are bucketed by
/// grid cell and tested against the 3x3 cell neighborhood, so crossings on
/// cell edges and corners are not lost.
pub fn contour_intersections(family_a: &[Segment], family_b: &[Segment]) -> Vec<(f64, f64)> {
    use std::collections::HashMap;
    let mut by_cell: HashMap<(usize, usize), Vec<&Segment>> = HashMap::new();
    for seg in family_b {
        by_cell.entry(seg.cell).or_default().push(seg);
    }
    let mut out = Vec::new();
    for seg in family_a {
        for dp in -1i64..=1 {
            for dt in -1i64..=1 {
                let ip = seg.cell.0 as i64 + dp;
                let it = seg.cell.1 as i64 + dt;
                if ip < 0 || it < 0 {
                    continue;
                }
                let Some(others) = by_cell.get(&(ip as usize, it as usize)) else {
                    continue;
                };
                for other in others {
                    if let Some(p) = segment_intersection(seg, other) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Merge points closer than `radius` (Euclidean in degrees), averaging each
/// cluster.
pub fn dedupe_points(points: &[(f64, f64)], radius: f64) -> Vec<(f64, f64)> {
    let mut clusters: Vec<Vec<(f64, f64)>> = Vec::new();
    for &p in points {
        let mut placed = false;
        for cluster in clusters.iter_mut() {
            if cluster.iter().any(|q| dist(p, *q) < radius) {
                cluster.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push(vec![p]);
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            let n = c.len() as f64;
            let (sp, st) = c.iter().fold((0.0, 0.0), |acc, q| (acc.0 + q.0, acc.1 + q.1));
            (sp / n, st / n)
        })
        .collect()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(
        f: impl Fn(f64, f64) -> f64,
        phis: &[f64],
        thetas: &[f64],
    ) -> Vec<Vec<Option<f64>>> {
        phis.iter()
            .map(|&p| thetas.iter().map(|&t| Some(f(p, t))).collect())
            .collect()
    }

    #[test]
    fn circle_contour_is_found() {
        // f = p^2 + t^2; level 4 contour is the radius-2 circle.
        let phis: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.5).collect();
        let thetas: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.5).collect();
        let field = grid(|p, t| p * p + t * t, &phis, &thetas);
        let segs = marching_squares(&field, &phis, &thetas, 4.0, false, 0.0);
        assert!(!segs.is_empty());
        for s in &segs {
            for &(p, t) in &[s.a, s.b] {
                let r = (p * p + t * t).sqrt();
                assert!((r - 2.0).abs() < 0.15, "point ({p},{t}) far from circle");
            }
        }
    }

    #[test]
    fn crossing_lines_intersect_once() {
        // f_a = p - t (zero on the diagonal), f_b = p + t - 1.
        let phis: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let thetas = phis.clone();
        let fa = grid(|p, t| p - t, &phis, &thetas);
        let fb = grid(|p, t| p + t - 1.0, &phis, &thetas);
        let sa = marching_squares(&fa, &phis, &thetas, 0.0, false, 0.0);
        let sb = marching_squares(&fb, &phis, &thetas, 0.0, false, 0.0);
        let raw = contour_intersections(&sa, &sb);
        let pts = dedupe_points(&raw, 0.3);
        assert_eq!(pts.len(), 1);
        assert!((pts[0].0 - 0.5).abs() < 1e-6);
        assert!((pts[0].1 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn holes_suppress_cells() {
        let phis: Vec<f64> = (0..=4).map(|i| i as f64).collect();
        let thetas = phis.clone();
        let mut field = grid(|p, _| p - 2.0, &phis, &thetas);
        for row in field.iter_mut() {
            row[2] = None;
        }
        let segs = marching_squares(&field, &phis, &thetas, 0.0, false, 0.0);
        for s in &segs {
            // No segment may live in cells adjacent to the hole column.
            assert!(s.cell.1 != 1 && s.cell.1 != 2);
        }
    }

    #[test]
    fn dedupe_merges_neighbors() {
        let pts = vec![(1.0, 1.0), (1.4, 1.0), (5.0, 5.0)];
        let merged = dedupe_points(&pts, 1.0);
        assert_eq!(merged.len(), 2);
    }
}
