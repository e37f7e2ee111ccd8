//! Discretization substrate: half-offset circle grids, the Cayley transfer
//! between the line and circle models, spectral calculus, resampling and
//! normalized antiderivatives.
//!
//! Nodes sit at `theta_j = 2*pi*(j + 1/2)/n`, so `w = 1` (the Cayley image of
//! infinity) is never a node and line-model functions with finite limits at
//! +-infinity stay finite at every node.
//!
//! ```
//! use wpcurves::grid::{make_grid, spectral_derivative, GridFunction};
//! use num_complex::Complex64;
//!
//! let grid = make_grid(64).unwrap();
//! let f = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.sin(), 0.0));
//! let df = spectral_derivative(&f).unwrap();
//! let cos = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.cos(), 0.0));
//! assert!(df.sub(&cos).sup_norm() < 1e-13);
//! ```

use crate::error::{Error, Result};
use crate::interp;
use crate::spectral;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Uniform half-offset grid on the circle, `n` a power of two, `n >= 16`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize(n));
        }
        Ok(CircleGrid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Node angle `theta_j = 2*pi*(j + 1/2)/n`.
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * (j as f64 + 0.5) / self.n as f64
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.theta(j)).collect()
    }

    /// Cayley-pullback line node `x_j = K^{-1}(e^{i theta_j}) = -cot(theta_j/2)`.
    pub fn line_node(&self, j: usize) -> f64 {
        -1.0 / (self.theta(j) / 2.0).tan()
    }

    pub fn line_nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.line_node(j)).collect()
    }

    /// Quadrature weight for `int_R g(x) dx` expressed on the theta grid:
    /// `dx = csc^2(theta/2)/2 dtheta`, trapezoid on the uniform theta grid.
    pub fn line_weight(&self, j: usize) -> f64 {
        let s = (self.theta(j) / 2.0).sin();
        self.spacing() * 0.5 / (s * s)
    }
}

/// Which model a sampled function lives on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Circle,
    Line,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::Circle => "circle",
            Domain::Line => "line",
        }
    }
}

/// The fixed Cayley map `K(x) = (x - i)/(x + i)` and its inverse.
#[derive(Clone, Copy, Debug, Default)]
pub struct CayleyMap;

impl CayleyMap {
    pub fn forward(x: Complex64) -> Complex64 {
        (x - Complex64::i()) / (x + Complex64::i())
    }

    pub fn inverse(w: Complex64) -> Complex64 {
        Complex64::i() * (Complex64::new(1.0, 0.0) + w) / (Complex64::new(1.0, 0.0) - w)
    }
}

/// Complex-valued samples on a circle grid or its Cayley-pullback line grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    domain: Domain,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: CircleGrid, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(j));
        }
        Ok(GridFunction { grid, domain, values })
    }

    pub fn from_circle_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.theta(j))).collect();
        GridFunction { grid, domain: Domain::Circle, values }
    }

    pub fn from_line_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.line_node(j))).collect();
        GridFunction { grid, domain: Domain::Line, values }
    }

    pub fn zero(grid: CircleGrid, domain: Domain) -> Self {
        GridFunction { grid, domain, values: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn expect_domain(&self, domain: Domain) -> Result<()> {
        if self.domain != domain {
            return Err(Error::DomainMismatch { expected: domain.name(), got: self.domain.name() });
        }
        Ok(())
    }

    /// Mean over the circle nodes (uniform trapezoid, so exact for the
    /// zero-frequency coefficient of the interpolant).
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.n() as f64
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridFunction {
            grid: self.grid,
            domain: self.domain,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        GridFunction {
            grid: self.grid,
            domain: self.domain,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &GridFunction) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &GridFunction) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|v| a * v)
    }

    /// Subtract the mean.
    pub fn mean_zero(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Standard deviation of the samples around their mean, used for
    /// "equal modulo an additive constant" comparisons.
    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let var: f64 =
            self.values.iter().map(|v| (v - m).norm_sqr()).sum::<f64>() / self.n() as f64;
        var.sqrt()
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        spectral::coefficients(&self.values)
    }

    pub fn from_coefficients(grid: CircleGrid, coeffs: &[Complex64]) -> Result<Self> {
        GridFunction::new(grid, Domain::Circle, spectral::synthesize(coeffs))
    }
}

/// Build a half-offset circle grid. Rejects `n` that is not a power of two
/// (the spectral pipeline requires it) or below 16.
pub fn make_grid(n: usize) -> Result<CircleGrid> {
    CircleGrid::new(n)
}

/// Retag a line-model function as the circle-model push-forward `f o K^{-1}`.
/// Line nodes are by construction the Cayley pullbacks of the circle nodes,
/// so the sample values are shared; only the domain tag changes.
pub fn cayley_pushforward(f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(Domain::Line)?;
    GridFunction::new(f.grid(), Domain::Circle, f.values().to_vec())
}

/// Inverse of [`cayley_pushforward`].
pub fn cayley_pullback(f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(Domain::Circle)?;
    GridFunction::new(f.grid(), Domain::Line, f.values().to_vec())
}

/// d/dtheta via the Fourier multiplier `i k`. Warns (log channel) when the
/// top quarter of the spectrum carries non-negligible energy.
pub fn spectral_derivative(f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(Domain::Circle)?;
    let n = f.n();
    let mut c = f.coefficients();
    let tail = spectral::tail_energy_fraction(&c);
    if tail > 1e-10 {
        log::warn!("spectral_derivative: top-quarter spectral energy fraction {tail:.2e} exceeds 1e-10; result may be aliased");
    }
    for (i, ck) in c.iter_mut().enumerate() {
        let k = spectral::frequency(i, n);
        if k == -(n as i64) / 2 {
            *ck = Complex64::new(0.0, 0.0);
        } else {
            *ck *= Complex64::new(0.0, k as f64);
        }
    }
    GridFunction::from_coefficients(f.grid(), &c)
}

/// Rotate a circle function: `f(theta) -> f(theta + t)` by the phase shift
/// `c_k -> c_k e^{ikt}` (exact on the trigonometric interpolant).
pub fn rotate(f: &GridFunction, t: f64) -> Result<GridFunction> {
    f.expect_domain(Domain::Circle)?;
    let n = f.n();
    let mut c = f.coefficients();
    for (i, ck) in c.iter_mut().enumerate() {
        let k = spectral::frequency(i, n) as f64;
        *ck *= Complex64::from_polar(1.0, k * t);
    }
    GridFunction::from_coefficients(f.grid(), &c)
}

/// Composition `f o g` where `g` is given by its values at the nodes.
///
/// Circle: `g` must be strictly increasing with winding one
/// (`g(theta + 2pi) = g(theta) + 2pi`); evaluation is trigonometric.
/// Line: `g` must be strictly increasing within the node span; evaluation is
/// by a shape-preserving cubic spline.
pub fn resample_compose(f: &GridFunction, g: &[f64]) -> Result<GridFunction> {
    if g.len() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: g.len() });
    }
    for i in 1..g.len() {
        if g[i] <= g[i - 1] {
            return Err(Error::NonMonotone(i));
        }
    }
    match f.domain() {
        Domain::Circle => {
            if g[g.len() - 1] - g[0] >= 2.0 * PI {
                return Err(Error::NonMonotone(g.len() - 1));
            }
            let c = f.coefficients();
            let values = g.iter().map(|&t| spectral::eval(&c, t)).collect();
            GridFunction::new(f.grid(), Domain::Circle, values)
        }
        Domain::Line => {
            let xs = f.grid().line_nodes();
            if g[0] < xs[0] || g[g.len() - 1] > xs[xs.len() - 1] {
                return Err(Error::InvalidParameter(
                    "composition target leaves the sampled line range".into(),
                ));
            }
            let re: Vec<f64> = f.values().iter().map(|v| v.re).collect();
            let im: Vec<f64> = f.values().iter().map(|v| v.im).collect();
            let sre = interp::CubicSpline::new(&xs, &re)?;
            let sim = interp::CubicSpline::new(&xs, &im)?;
            let values = g.iter().map(|&x| Complex64::new(sre.eval(x), sim.eval(x))).collect();
            GridFunction::new(f.grid(), Domain::Line, values)
        }
    }
}

/// Normalized antiderivative with `F(0) = 0`.
///
/// Circle: the mean-zero part is integrated spectrally (`c_k / (ik)`) and the
/// mean `m` contributes the explicit linear term `m * theta`.
/// Line: composite trapezoid on the nonuniform nodes, anchored at `x = 0` by
/// linear interpolation between the middle nodes.
pub fn antiderivative_normalized(f: &GridFunction) -> Result<GridFunction> {
    match f.domain() {
        Domain::Circle => {
            let n = f.n();
            let mut c = f.coefficients();
            let m = c[0];
            c[0] = Complex64::new(0.0, 0.0);
            for (i, ck) in c.iter_mut().enumerate() {
                let k = spectral::frequency(i, n);
                if k != 0 {
                    *ck /= Complex64::new(0.0, k as f64);
                }
            }
            // value of the oscillatory part at theta = 0, to enforce F(0) = 0
            let at_zero: Complex64 = c.iter().sum();
            let values = (0..n)
                .map(|j| {
                    let theta = f.grid().theta(j);
                    spectral::eval(&c, theta) - at_zero + m * theta
                })
                .collect();
            GridFunction::new(f.grid(), Domain::Circle, values)
        }
        Domain::Line => {
            let xs = f.grid().line_nodes();
            let v = f.values();
            let n = f.n();
            let mut cum = vec![Complex64::new(0.0, 0.0); n];
            for j in 1..n {
                cum[j] = cum[j - 1] + 0.5 * (v[j] + v[j - 1]) * (xs[j] - xs[j - 1]);
            }
            // anchor F(0) = 0: x = 0 lies between nodes n/2 - 1 and n/2
            let (a, b) = (n / 2 - 1, n / 2);
            let t = (0.0 - xs[a]) / (xs[b] - xs[a]);
            let f0 = cum[a] * (1.0 - t) + cum[b] * t;
            let values = cum.into_iter().map(|c| c - f0).collect();
            GridFunction::new(f.grid(), Domain::Line, values)
        }
    }
}
