//! Ordinary least-squares fits for one- and two-parameter linear models.

/// Result of a straight-line fit `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub residual_rms: f64,
}

/// Least-squares straight line through `(x, y)` pairs.
///
/// Returns `None` with fewer than two distinct abscissae.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let mx = sx / nf;
    let my = sy / nf;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (slope * xi + intercept);
            r * r
        })
        .sum();
    let dof = (n.saturating_sub(2)).max(1) as f64;
    let sigma2 = ss_res / dof;
    Some(LineFit {
        slope,
        intercept,
        slope_stderr: (sigma2 / sxx).sqrt(),
        residual_rms: (ss_res / nf).sqrt(),
    })
}

/// Two-parameter linear least squares `y ~ a * u + b * w` with parameter
/// standard errors from the unscaled covariance times the residual variance.
#[derive(Debug, Clone, Copy)]
pub struct TwoParamFit {
    pub a: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub b_stderr: f64,
    pub residual_rms: f64,
}

pub fn fit_two_param(u: &[f64], w: &[f64], y: &[f64]) -> Option<TwoParamFit> {
    assert_eq!(u.len(), y.len());
    assert_eq!(w.len(), y.len());
    let n = u.len();
    if n < 2 {
        return None;
    }
    let suu: f64 = u.iter().map(|v| v * v).sum();
    let sww: f64 = w.iter().map(|v| v * v).sum();
    let suw: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
    let suy: f64 = u.iter().zip(y).map(|(a, b)| a * b).sum();
    let swy: f64 = w.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = suu * sww - suw * suw;
    let scale = suu.abs().max(sww.abs());
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    let a = (sww * suy - suw * swy) / det;
    let b = (suu * swy - suw * suy) / det;
    let ss_res: f64 = (0..n)
        .map(|i| {
            let r = y[i] - a * u[i] - b * w[i];
            r * r
        })
        .sum();
    let dof = (n.saturating_sub(2)).max(1) as f64;
    let sigma2 = ss_res / dof;
    Some(TwoParamFit {
        a,
        b,
        a_stderr: (sigma2 * sww / det).sqrt(),
        b_stderr: (sigma2 * suu / det).sqrt(),
        residual_rms: (ss_res / n as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line_recovery() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|xi| 3.0 * xi - 2.0).collect();
        let fit = fit_line(&x, &y).unwrap();
        assert_relative_eq!(fit.slope, 3.0, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, -2.0, epsilon = 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn two_param_exact_recovery() {
        let u: Vec<f64> = (1..9).map(|i| 1.0 / (i as f64 * i as f64)).collect();
        let w = vec![1.0; 8];
        let y: Vec<f64> = u.iter().map(|ui| 5.0 * ui + 0.7).collect();
        let fit = fit_two_param(&u, &w, &y).unwrap();
        assert_relative_eq!(fit.a, 5.0, epsilon = 1e-10);
        assert_relative_eq!(fit.b, 0.7, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_design_rejected() {
        let u = vec![1.0, 1.0, 1.0];
        let w = vec![2.0, 2.0, 2.0];
        let y = vec![0.0, 1.0, 2.0];
        assert!(fit_two_param(&u, &w, &y).is_none());
    }
}
