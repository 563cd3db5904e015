//! Five-point finite-difference stencils on uniform grids.
//!
//! Interior points use the O(h^4) central stencil. Non-periodic grids fall
//! back to one-sided five-point stencils at the two points nearest each end,
//! so the output aligns one-to-one with the input samples.

/// First derivative of uniformly sampled `f` with spacing `h`.
///
/// `periodic = true` treats the samples as one full period (the point after
/// the last sample is the first sample).
pub fn derivative(f: &[f64], h: f64, periodic: bool) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "five-point stencil needs at least 5 samples");
    assert!(h > 0.0);
    let mut out = vec![0.0; n];

    let central = |m2: f64, m1: f64, p1: f64, p2: f64| (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);

    if periodic {
        for i in 0..n {
            let idx = |k: isize| f[(i as isize + k).rem_euclid(n as isize) as usize];
            out[i] = central(idx(-2), idx(-1), idx(1), idx(2));
        }
        return out;
    }

    for i in 2..n - 2 {
        out[i] = central(f[i - 2], f[i - 1], f[i + 1], f[i + 2]);
    }
    // One-sided O(h^4) stencils at the edges.
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / (12.0 * h);
    out[n - 2] =
        (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
            / (12.0 * h);
    out
}

/// First and second derivative at the center of exactly five samples.
pub fn center_derivatives(f: &[f64; 5], h: f64) -> (f64, f64) {
    let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    (d1, d2)
}
