//! Piecewise-cubic Hermite interpolation on nonuniform nodes (line model)
//! and inversion of sampled monotone maps.

use crate::error::{Error, Result};

/// C^1 piecewise-cubic Hermite interpolant. Node slopes come from the local
/// cubic through the four nearest nodes, so values are 4th-order and
/// derivatives 3rd-order accurate for smooth data.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

/// Derivative at `xs[i]` of the Lagrange polynomial through the window
/// nodes.
fn lagrange_derivative(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let m = xs.len();
    let xi = xs[i];
    // Shifting by ys[i] leaves the derivative unchanged but keeps constant
    // data exact (the raw sum cancels only approximately on wide windows).
    let base = ys[i];
    let mut total = 0.0;
    for j in 0..m {
        if j == i {
            continue;
        }
        let mut denom = 1.0;
        for k in 0..m {
            if k != j {
                denom *= xs[j] - xs[k];
            }
        }
        let mut num = 0.0;
        for l in 0..m {
            if l == j {
                continue;
            }
            let mut term = 1.0;
            for k in 0..m {
                if k != j && k != l {
                    term *= xi - xs[k];
                }
            }
            num += term;
        }
        total += (ys[j] - base) * num / denom;
    }
    total
}

impl CubicSpline {
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 3 {
            return Err(Error::InvalidParameter("spline needs at least 3 matching nodes".into()));
        }
        let n = xs.len();
        for i in 1..n {
            if xs[i] <= xs[i - 1] {
                return Err(Error::NonMonotone(i));
            }
        }
        let width = 6.min(n);
        let mut slopes = vec![0.0; n];
        for i in 0..n {
            let s = i.saturating_sub(width / 2).min(n - width);
            slopes[i] = lagrange_derivative(&xs[s..s + width], &ys[s..s + width], i - s);
        }
        Ok(CubicSpline { xs: xs.to_vec(), ys: ys.to_vec(), slopes })
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        // difference form: exact for constant data (slopes vanish exactly)
        y0 + (y1 - y0) * (3.0 * t2 - 2.0 * t3)
            + m0 * (t3 - 2.0 * t2 + t)
            + m1 * (t3 - t2)
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        ((y1 - y0) * (6.0 * t - 6.0 * t2)
            + m0 * (3.0 * t2 - 4.0 * t + 1.0)
            + m1 * (3.0 * t2 - 2.0 * t))
            / h
    }

    /// Solve `self(x) = y` for strictly increasing data by bisection refined
    /// with Newton steps.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let n = self.xs.len();
        if y < self.ys[0] || y > self.ys[n - 1] {
            return Err(Error::InvalidParameter(format!("inversion target {y} out of range")));
        }
        let mut lo = self.xs[0];
        let mut hi = self.xs[n - 1];
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let v = self.eval(x) - y;
            if v.abs() < 1e-14 * (1.0 + y.abs()) {
                return Ok(x);
            }
            if v > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.eval_derivative(x);
            let newton = if d > 0.0 { x - v / d } else { f64::NAN };
            x = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.7).sin()).collect();
        let s = CubicSpline::new(&xs, &ys).unwrap();
        for i in 0..200 {
            let x = 0.05 + i as f64 * 0.024;
            assert!((s.eval(x) - (x * 0.7).sin()).abs() < 2e-4);
        }
    }

    #[test]
    fn inverts_monotone_map() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x + 0.3 * (1.0 - (-x).exp())).collect();
        let s = CubicSpline::new(&xs, &ys).unwrap();
        for i in 1..50 {
            let x = i as f64 * 0.17;
            let y = x + 0.3 * (1.0 - (-x).exp());
            assert!((s.invert(y).unwrap() - x).abs() < 1e-5);
        }
    }

    #[test]
    fn rejects_non_monotone_nodes() {
        let xs = [0.0, 1.0, 0.5, 2.0];
        let ys = [0.0, 1.0, 2.0, 3.0];
        assert!(CubicSpline::new(&xs, &ys).is_err());
    }
}
