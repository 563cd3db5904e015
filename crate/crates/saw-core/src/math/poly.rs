//! Dense real polynomials and a simultaneous complex root finder.

use num_complex::Complex64;

/// Real polynomial stored as ascending coefficients `c[0] + c[1] x + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        let mut d = self.coeffs.len().saturating_sub(1);
        while d > 0 && self.coeffs[d] == 0.0 {
            d -= 1;
        }
        d
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        Poly::new(coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0.0)
                - other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Poly::new(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// All complex roots of `p` by the Aberth–Ehrlich simultaneous iteration.
///
/// `warm_start` seeds the iteration (e.g. roots of a nearby polynomial);
/// otherwise points on a circle inside the Cauchy bound are used. Multiple
/// roots converge only linearly, so the iteration also accepts a relaxed
/// settle threshold after the budget is spent. Returns `None` when the
/// leading coefficient vanishes relative to the coefficient scale or the
/// iteration fails to settle at all.
pub fn aberth_roots(
    p: &Poly,
    tol: f64,
    max_iter: usize,
    warm_start: Option<&[Complex64]>,
) -> Option<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 {
        return Some(Vec::new());
    }
    let scale = p
        .coeffs
        .iter()
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 || p.coeffs[deg].abs() < 1e-14 * scale {
        return None;
    }
    let monic: Vec<f64> = p.coeffs[..=deg]
        .iter()
        .map(|c| c / p.coeffs[deg])
        .collect();
    let pm = Poly::new(monic);
    let dpm = pm.derivative();

    // Cauchy bound for the root radius.
    let radius = 1.0
        + pm.coeffs[..deg]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()));

    let circle = |k: usize| {
        let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.354) / deg as f64 + 0.5;
        Complex64::from_polar(0.5 * radius.max(1e-3), ang)
    };
    let mut roots: Vec<Complex64> = match warm_start {
        Some(ws) if ws.len() == deg => ws.to_vec(),
        _ => (0..deg).map(circle).collect(),
    };
    // Warm starts must be distinct for the repulsion term.
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-12 * (1.0 + roots[i].norm()) {
                roots[i] += Complex64::new(1e-9, 1e-9) * (i as f64 + 1.0);
            }
        }
    }

    let mut last_step = f64::MAX;
    for _ in 0..max_iter {
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let zi = roots[i];
            let pv = pm.eval(zi);
            let dv = dpm.eval(zi);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = pv / dv;
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 1e-300 {
                        sum += 1.0 / diff;
                    }
                }
            }
            let denom = 1.0 - newton * sum;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            roots[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        last_step = max_step;
        if max_step < tol {
            break;
        }
    }
    // Relaxed settle tier covers multiple roots, whose attainable accuracy
    // is O(sqrt(eps)) anyway.
    if last_step >= tol && last_step > 1e-6 {
        return None;
    }

    for root in roots.iter_mut() {
        for _ in 0..3 {
            let pv = pm.eval(*root);
            let dv = dpm.eval(*root);
            if dv.norm() < 1e-300 {
                break;
            }
            let step = pv / dv;
            if step.norm() > 1.0 {
                break;
            }
            *root -= step;
        }
    }
    Some(roots)
}
