//! Cubic interpolation of uniformly sampled data (Catmull–Rom).

/// Uniformly sampled function with C1 cubic interpolation between samples.
#[derive(Debug, Clone)]
pub struct UniformCubic {
    x0: f64,
    h: f64,
    samples: Vec<f64>,
}

impl UniformCubic {
    pub fn new(x0: f64, h: f64, samples: Vec<f64>) -> Self {
        assert!(samples.len() >= 4, "cubic interpolation needs >= 4 samples");
        assert!(h > 0.0);
        Self { x0, h, samples }
    }

    pub fn x_min(&self) -> f64 {
        self.x0
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.h * (self.samples.len() - 1) as f64
    }

    /// Interpolated value; clamps to the sampled range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.samples.len();
        let t = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).min(n - 2);
        let u = t - i as f64;
        let s = &self.samples;
        // Clamped end tangents: duplicate the edge sample.
        let p0 = if i == 0 { s[0] } else { s[i - 1] };
        let p1 = s[i];
        let p2 = s[i + 1];
        let p3 = if i + 2 >= n { s[n - 1] } else { s[i + 2] };
        let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        let c = -0.5 * p0 + 0.5 * p2;
        ((a * u + b) * u + c) * u + p1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_samples() {
        let s = vec![1.0, 2.0, 0.5, -1.0, 3.0];
        let f = UniformCubic::new(0.0, 0.5, s.clone());
        for (i, v) in s.iter().enumerate() {
            assert_relative_eq!(f.eval(i as f64 * 0.5), *v, epsilon = 1e-12);
        }
    }

    #[test]
    fn close_to_smooth_function() {
        let h = 0.02;
        let samples: Vec<f64> = (0..200).map(|i| (i as f64 * h).sin()).collect();
        let f = UniformCubic::new(0.0, h, samples);
        for k in 0..500 {
            let x = 0.05 + k as f64 * 0.007;
            assert_relative_eq!(f.eval(x), x.sin(), epsilon = 1e-6);
        }
    }
}
