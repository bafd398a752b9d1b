//! Natural cubic spline through complex samples on a strictly increasing grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ComplexSpline {
    xs: Vec<f64>,
    ys: Vec<Complex64>,
    second: Vec<Complex64>,
}

impl ComplexSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<Complex64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::InvalidInput(format!(
                "spline needs at least two nodes and matching lengths (got {} and {})",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("spline nodes must be strictly increasing".into()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut second = vec![zero; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut rhs = vec![zero; m];
            let mut upper = vec![0.0; m];
            for i in 0..m {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            for i in 1..m {
                let lower = xs[i + 1] - xs[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                let prev = rhs[i - 1];
                rhs[i] -= prev * w;
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - second[i + 2] * upper[i]) / diag[i];
            }
        }
        Ok(Self { xs, ys, second })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.ys
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.xs[0] && x <= self.xs[self.xs.len() - 1]
    }

    /// Spline value; `None` outside the node range.
    pub fn eval(&self, x: f64) -> Option<Complex64> {
        if !self.contains(x) {
            return None;
        }
        let n = self.xs.len();
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let cubic = ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * (h * h / 6.0);
        Some(self.ys[i] * a + self.ys[i + 1] * b + cubic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_lines() {
        let xs: Vec<f64> = (0..7).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(2.0 * x - 1.0, 3.0)).collect();
        let s = ComplexSpline::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x).unwrap() - y).norm() < 1e-14);
        }
        assert!((s.eval(1.23).unwrap() - Complex64::new(1.46, 3.0)).norm() < 1e-13);
        assert!(s.eval(-0.1).is_none() && s.eval(3.01).is_none());
    }

    #[test]
    fn fourth_order_interior_accuracy() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 * 4.0 - 2.0).collect();
            let ys = xs.iter().map(|&x| Complex64::new((-x * x).exp(), x.sin())).collect();
            let s = ComplexSpline::new(xs, ys).unwrap();
            (0..200)
                .map(|k| -1.0 + k as f64 * 0.01)
                .map(|x| (s.eval(x).unwrap() - Complex64::new((-x * x).exp(), x.sin())).norm())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(80), err(160));
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn rejects_bad_grids() {
        let z = Complex64::new(0.0, 0.0);
        assert!(ComplexSpline::new(vec![0.0], vec![z]).is_err());
        assert!(ComplexSpline::new(vec![0.0, 0.0], vec![z, z]).is_err());
    }
}
