//! Hilbert transform, Riesz/Szego projections and harmonic/analytic
//! extensions in the circle (spectral) and line (principal-value quadrature)
//! models.
//!
//! Conventions: all transforms act on the mean-zero quotient. On the circle
//! the Hilbert transform is the Fourier multiplier `-i sgn(k)`, so
//! `H(cos n t) = sin n t` and `H(H f) = -f` on mean-zero functions. The Riesz
//! projections `P^+/P^-` keep strictly positive/negative frequencies;
//! constants map to zero under both.
//!
//! ```
//! use wpcurves::grid::{make_grid, GridFunction};
//! use wpcurves::transforms::{riesz_project, Side};
//! use num_complex::Complex64;
//!
//! let grid = make_grid(64).unwrap();
//! let f = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.cos(), 0.0));
//! // cos t = (e^{it} + e^{-it})/2, so P^+ keeps e^{it}/2
//! let plus = riesz_project(&f, Side::Plus).unwrap();
//! let expect = GridFunction::from_circle_fn(grid, |t| Complex64::from_polar(0.5, t));
//! assert!(plus.sub(&expect).sup_norm() < 1e-13);
//! ```

use crate::error::{Error, Result};
use crate::grid::{CircleGrid, Domain, GridFunction};
use crate::spectral;
use num_complex::Complex64;
use std::f64::consts::PI;

/// One-sided Fourier/Taylor coefficients of a holomorphic function: `plus`
/// means nonnegative frequencies (interior-analytic on the disk), `minus`
/// nonpositive frequencies (exterior-analytic).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Plus,
    Minus,
}

/// Coefficient vector `a_0..a_m` of a holomorphic function in the disk model
/// (half-plane inputs are transferred by Cayley before being stored).
#[derive(Clone, Debug)]
pub struct AnalyticCoefficients {
    pub side: Side,
    pub coeffs: Vec<Complex64>,
}

impl AnalyticCoefficients {
    pub fn new(side: Side, coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(j) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(j));
        }
        Ok(AnalyticCoefficients { side, coeffs })
    }

    /// Evaluate at a point of the disk (`plus`) or its exterior (`minus`).
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let z = match self.side {
            Side::Plus => w,
            Side::Minus => 1.0 / w,
        };
        // Horner on a_0 + a_1 z + ...
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// k-th derivative coefficients (disk variable), for `plus` side.
    pub fn derivative(&self) -> AnalyticCoefficients {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        AnalyticCoefficients { side: self.side, coeffs }
    }

    /// Boundary trace on a circle grid.
    pub fn trace(&self, grid: CircleGrid) -> GridFunction {
        GridFunction::from_circle_fn(grid, |t| self.eval(Complex64::from_polar(1.0, t)))
    }
}

/// Fourier-multiplier Hilbert transform `-i sgn(k)`; the constant component
/// maps to zero and the output is mean-zero.
pub fn hilbert_circle(f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(Domain::Circle)?;
    let n = f.n();
    let mut c = f.coefficients();
    for (i, ck) in c.iter_mut().enumerate() {
        let k = spectral::frequency(i, n);
        *ck *= match k.signum() {
            1 => Complex64::new(0.0, -1.0),
            -1 => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        };
    }
    GridFunction::from_coefficients(f.grid(), &c)
}

/// Principal-value Hilbert transform on the line by singularity-subtracted
/// trapezoid quadrature in the Cayley angle variable.
///
/// The substitution `t = -cot(theta/2)` turns `int_R . dt` into a uniform
/// periodic trapezoid sum whose nodes are symmetric under `t -> -t`, so the
/// symmetric principal value at infinity is built in. The diagonal node uses
/// the limit `(f(t)-f(x))/(x-t) -> -f'(x)` with a spectral derivative.
///
/// Without `regularized`, the input must decay at +-infinity (checked against
/// the outermost samples). With `regularized`, the kernel
/// `1/(x-t) + t/(1+t^2)` is used and the result carries the corresponding
/// additive constant; BMO-class inputs are accepted.
pub fn hilbert_line(f: &GridFunction, regularized: bool) -> Result<GridFunction> {
    f.expect_domain(Domain::Line)?;
    let n = f.n();
    let grid = f.grid();
    let v = f.values();
    if !regularized {
        let edge = v[0].norm().max(v[n - 1].norm());
        let mid = f.sup_norm();
        if mid > 0.0 && edge > 1e-3 * mid {
            return Err(Error::InsufficientDecay);
        }
    }
    let xs = grid.line_nodes();
    let ws: Vec<f64> = (0..n).map(|j| grid.line_weight(j)).collect();
    // df/dt at the nodes: chain rule through the circle model,
    // d/dt = (dtheta/dt) d/dtheta = 2 sin^2(theta/2) d/dtheta... note
    // dt/dtheta = csc^2(theta/2)/2, so dtheta/dt = 2 sin^2(theta/2).
    let circle = GridFunction::new(grid, Domain::Circle, v.to_vec())?;
    let dtheta = crate::grid::spectral_derivative(&circle)?;
    let dfdt: Vec<Complex64> = (0..n)
        .map(|j| {
            let s = (grid.theta(j) / 2.0).sin();
            dtheta.values()[j] * 2.0 * s * s
        })
        .collect();

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let x = xs[i];
        let fx = v[i];
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let term = if j == i {
                -dfdt[i]
            } else {
                (v[j] - fx) / (x - xs[j])
            };
            acc += ws[j] * term;
        }
        out[i] = acc / PI;
    }
    if regularized {
        // regularized kernel differs from the subtracted form by the
        // x-independent constant (1/pi) int f(t) t/(1+t^2) dt
        let c: Complex64 = (0..n)
            .map(|j| v[j] * (xs[j] / (1.0 + xs[j] * xs[j])) * ws[j])
            .sum::<Complex64>()
            / PI;
        for o in out.iter_mut() {
            *o += c;
        }
    }
    GridFunction::new(grid, Domain::Line, out)
}

/// Riesz projection `P^+`/`P^-`: frequency truncation on the circle,
/// `(f +- i H f)/2` on the line. Constants map to zero under both signs.
pub fn riesz_project(f: &GridFunction, side: Side) -> Result<GridFunction> {
    match f.domain() {
        Domain::Circle => {
            let n = f.n();
            let mut c = f.coefficients();
            for (i, ck) in c.iter_mut().enumerate() {
                let k = spectral::frequency(i, n);
                let keep = match side {
                    Side::Plus => k > 0,
                    Side::Minus => k < 0,
                };
                if !keep {
                    *ck = Complex64::new(0.0, 0.0);
                }
            }
            GridFunction::from_coefficients(f.grid(), &c)
        }
        Domain::Line => {
            let h = hilbert_line(f, true)?;
            let sign = match side {
                Side::Plus => 1.0,
                Side::Minus => -1.0,
            };
            Ok(f.mean_zero().zip(&h.mean_zero(), |a, b| {
                0.5 * (a + Complex64::new(0.0, sign) * b)
            }))
        }
    }
}

/// Extension kernel for [`harmonic_extend`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtensionMode {
    /// Cauchy-type integral: `(1/2pi i) oint f(z)/(z - zeta) dz` on the
    /// circle, `(1/pi) int f(t)/(z - t) dt` on the line.
    Szego,
    /// Poisson integral (circle model).
    Poisson,
}

/// Evaluate the Szego (Cauchy-type) or Poisson integral of boundary data at
/// a point strictly off the boundary.
pub fn harmonic_extend(f: &GridFunction, point: Complex64, mode: ExtensionMode) -> Result<Complex64> {
    let n = f.n();
    let grid = f.grid();
    match f.domain() {
        Domain::Circle => {
            let dist = (point.norm() - 1.0).abs();
            if dist < 2.0 * grid.spacing() {
                return Err(Error::PointOnBoundary);
            }
            match mode {
                ExtensionMode::Szego => {
                    // (1/2pi i) oint f(z)/(z - zeta) dz, trapezoid in theta
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        let z = Complex64::from_polar(1.0, grid.theta(j));
                        acc += f.values()[j] * Complex64::i() * z / (z - point);
                    }
                    Ok(acc * grid.spacing() / (2.0 * PI * Complex64::i()))
                }
                ExtensionMode::Poisson => {
                    let r = point.norm();
                    if r >= 1.0 {
                        return Err(Error::InvalidParameter(
                            "Poisson extension expects an interior point".into(),
                        ));
                    }
                    let phi = point.arg();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        let t = grid.theta(j);
                        let kernel =
                            (1.0 - r * r) / (1.0 - 2.0 * r * (t - phi).cos() + r * r);
                        acc += f.values()[j] * kernel;
                    }
                    Ok(acc * grid.spacing() / (2.0 * PI))
                }
            }
        }
        Domain::Line => {
            if point.im.abs() < 1e-12 {
                return Err(Error::PointOnBoundary);
            }
            match mode {
                ExtensionMode::Szego => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        let t = grid.line_node(j);
                        acc += f.values()[j] / (point - t) * grid.line_weight(j);
                    }
                    Ok(acc / PI)
                }
                ExtensionMode::Poisson => {
                    let y = point.im.abs();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        let t = grid.line_node(j);
                        let kernel = y / ((point.re - t).powi(2) + y * y);
                        acc += f.values()[j] * kernel * grid.line_weight(j);
                    }
                    Ok(acc / PI)
                }
            }
        }
    }
}
