//! Clamped cubic splines on a uniform knot grid over `[0, 1]`.

/// One coordinate of a sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    values: Vec<f64>,
    // second derivatives at the knots
    moments: Vec<f64>,
    h: f64,
}

impl CubicSpline {
    /// Needs at least four samples; the end slopes come from the one-sided
    /// four-point difference formula.
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 4, "spline needs at least four samples");
        let h = 1.0 / (n - 1) as f64;
        let f = values;
        let d0 = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
        let dn = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);

        // tridiagonal system sub * M[i-1] + diag * M[i] + sup * M[i+1] = rhs
        let mut diag = vec![4.0; n];
        let sub = 1.0;
        let sup = 1.0;
        let mut rhs = vec![0.0; n];
        diag[0] = 2.0;
        diag[n - 1] = 2.0;
        rhs[0] = 6.0 / h * ((f[1] - f[0]) / h - d0);
        rhs[n - 1] = 6.0 / h * (dn - (f[n - 1] - f[n - 2]) / h);
        for i in 1..n - 1 {
            rhs[i] = 6.0 / (h * h) * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
        }
        // Thomas algorithm
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = sup / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - sub * c[i - 1];
            c[i] = if i < n - 1 { sup / m } else { 0.0 };
            d[i] = (rhs[i] - sub * d[i - 1]) / m;
        }
        let mut moments = vec![0.0; n];
        moments[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            moments[i] = d[i] - c[i] * moments[i + 1];
        }
        CubicSpline { values: values.to_vec(), moments, h }
    }

    fn segment(&self, tau: f64) -> (usize, f64, f64) {
        let n = self.values.len();
        let i = ((tau / self.h).floor() as isize).clamp(0, n as isize - 2) as usize;
        let left = i as f64 * self.h;
        // distances to the segment ends; beyond [0, 1] the end cubic is extended
        (i, tau - left, left + self.h - tau)
    }

    /// Value and first two derivatives at `tau`.
    pub fn eval(&self, tau: f64) -> [f64; 3] {
        let (i, a, b) = self.segment(tau);
        let h = self.h;
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        let c0 = f0 / h - m0 * h / 6.0;
        let c1 = f1 / h - m1 * h / 6.0;
        let v = m0 * b * b * b / (6.0 * h) + m1 * a * a * a / (6.0 * h) + c0 * b + c1 * a;
        let d1 = -m0 * b * b / (2.0 * h) + m1 * a * a / (2.0 * h) - c0 + c1;
        let d2 = (m0 * b + m1 * a) / h;
        [v, d1, d2]
    }

    pub fn knot_spacing(&self) -> f64 {
        self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_samples() {
        let vals: Vec<f64> = (0..10).map(|i| ((i as f64) * 0.3).sin()).collect();
        let s = CubicSpline::new(&vals);
        for (i, v) in vals.iter().enumerate() {
            assert!((s.eval(i as f64 / 9.0)[0] - v).abs() < 1e-14);
        }
    }

    #[test]
    fn reproduces_cubics() {
        // clamped spline with exact end slopes is exact on cubics
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x;
        let vals: Vec<f64> = (0..12).map(|i| p(i as f64 / 11.0)).collect();
        let s = CubicSpline::new(&vals);
        for x in [0.0, 0.13, 0.5, 0.77, 1.0] {
            let [v, d1, d2] = s.eval(x);
            assert!((v - p(x)).abs() < 1e-12);
            assert!((d1 - (-2.0 + x + 9.0 * x * x)).abs() < 1e-10);
            assert!((d2 - (1.0 + 18.0 * x)).abs() < 1e-8);
        }
    }

    #[test]
    fn linear_data_has_no_curvature() {
        let vals: Vec<f64> = (0..9).map(|i| 0.25 * i as f64 - 1.0).collect();
        let s = CubicSpline::new(&vals);
        for x in [0.0, 0.4, 1.0] {
            assert!(s.eval(x)[2].abs() < 1e-12);
        }
    }
}
