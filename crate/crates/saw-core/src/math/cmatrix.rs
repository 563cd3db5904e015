//! Dense complex 4x4 helpers: determinant, adjugate and null vectors.

use num_complex::Complex64;

pub type C4 = [Complex64; 4];
pub type M4 = [[Complex64; 4]; 4];

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// 3x3 determinant of the minor of `m` obtained by deleting `row` and `col`.
fn minor3(m: &M4, row: usize, col: usize) -> Complex64 {
    let rs: Vec<usize> = (0..4).filter(|&r| r != row).collect();
    let cs: Vec<usize> = (0..4).filter(|&c| c != col).collect();
    let a = |i: usize, j: usize| m[rs[i]][cs[j]];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

pub fn det4(m: &M4) -> Complex64 {
    let mut acc = C_ZERO;
    for col in 0..4 {
        let cof = minor3(m, 0, col);
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        acc += m[0][col] * cof * sign;
    }
    acc
}

/// Adjugate (transposed cofactor matrix): `m * adj(m) = det(m) * I`.
pub fn adjugate4(m: &M4) -> M4 {
    let mut adj = [[C_ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
            // Cofactor C_rc lands at adj[c][r].
            adj[c][r] = minor3(m, r, c) * sign;
        }
    }
    adj
}

/// Null vector of a rank-3 matrix, taken as the largest adjugate column and
/// normalized so the largest-magnitude component is real and positive.
///
/// Returns `None` when the adjugate vanishes (rank <= 2), which signals a
/// degenerate eigenbranch to the caller.
pub fn null_vector4(m: &M4) -> Option<C4> {
    let adj = adjugate4(m);
    let mut best_col = 0;
    let mut best_norm = 0.0;
    for c in 0..4 {
        let n: f64 = (0..4).map(|r| adj[r][c].norm_sqr()).sum();
        if n > best_norm {
            best_norm = n;
            best_col = c;
        }
    }
    // Scale relative to the matrix entries: adj entries are products of three
    // matrix entries, so compare against the cube of the matrix scale.
    let mscale: f64 = m
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if best_norm.sqrt() <= 1e-11 * mscale.powi(3) {
        return None;
    }
    let mut v = [C_ZERO; 4];
    for r in 0..4 {
        v[r] = adj[r][best_col];
    }
    normalize_phase(&mut v);
    Some(v)
}

/// Normalize to unit Euclidean norm with a deterministic phase.
///
/// The phase reference is a fixed linear functional of the components, which
/// varies smoothly with the vector (an argmax reference can flip between
/// near-tied components and discontinuously rotate the phase).
pub fn normalize_phase(v: &mut C4) {
    const W: [Complex64; 4] = [
        Complex64::new(1.0, 0.13),
        Complex64::new(0.71, -0.29),
        Complex64::new(0.43, 0.57),
        Complex64::new(0.17, -0.83),
    ];
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let mut s = C_ZERO;
    for (w, z) in W.iter().zip(v.iter()) {
        s += w * z;
    }
    if s.norm() < 1e-9 * norm {
        // Fall back to the largest component when the functional degenerates.
        let mut imax = 0;
        let mut nmax = 0.0;
        for (i, z) in v.iter().enumerate() {
            if z.norm_sqr() > nmax {
                nmax = z.norm_sqr();
                imax = i;
            }
        }
        s = v[imax];
    }
    let phase = s / s.norm();
    for z in v.iter_mut() {
        *z = *z / (phase * norm);
    }
}

/// Null-space basis of `m` by full-pivot Gaussian elimination.
///
/// `tol` is relative to the largest entry. Returned vectors are orthonormal
/// with deterministic phase.
pub fn null_space4(m: &M4, tol: f64) -> Vec<C4> {
    let mut u = *m;
    let mut col_perm = [0usize, 1, 2, 3];
    let scale = u
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if scale == 0.0 {
        let mut basis = Vec::new();
        for i in 0..4 {
            let mut v = [C_ZERO; 4];
            v[i] = Complex64::new(1.0, 0.0);
            basis.push(v);
        }
        return basis;
    }
    let cutoff = tol * scale;

    let mut rank = 0;
    for step in 0..4 {
        // Full pivot over the trailing block.
        let mut best = (step, step, 0.0_f64);
        for r in step..4 {
            for c in step..4 {
                let n = u[r][c].norm();
                if n > best.2 {
                    best = (r, c, n);
                }
            }
        }
        if best.2 <= cutoff {
            break;
        }
        let (pr, pc, _) = best;
        u.swap(step, pr);
        for row in u.iter_mut() {
            row.swap(step, pc);
        }
        col_perm.swap(step, pc);
        for r in (step + 1)..4 {
            let factor = u[r][step] / u[step][step];
            for c in step..4 {
                let sub = factor * u[step][c];
                u[r][c] -= sub;
            }
        }
        rank = step + 1;
    }

    let mut basis = Vec::new();
    for free in rank..4 {
        let mut x = [C_ZERO; 4];
        x[free] = Complex64::new(1.0, 0.0);
        for p in (0..rank).rev() {
            let mut acc = u[p][free];
            for c in (p + 1)..rank {
                acc += u[p][c] * x[c];
            }
            x[p] = -acc / u[p][p];
        }
        let mut v = [C_ZERO; 4];
        for (permuted, &orig) in col_perm.iter().enumerate() {
            v[orig] = x[permuted];
        }
        // Gram-Schmidt against earlier basis vectors.
        for prev in basis.iter() {
            let prev: &C4 = prev;
            let mut proj = C_ZERO;
            for i in 0..4 {
                proj += prev[i].conj() * v[i];
            }
            for i in 0..4 {
                v[i] -= proj * prev[i];
            }
        }
        normalize_phase(&mut v);
        basis.push(v);
    }
    basis
}

pub fn matvec4(m: &M4, v: &C4) -> C4 {
    let mut out = [C_ZERO; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r] += m[r][c] * v[c];
        }
    }
    out
}
