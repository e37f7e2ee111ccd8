//! Quasisymmetric maps, composition operators `C_h`, the affine translation
//! `Q_h(f) = C_h(f) + log h'`, logarithmic derivatives with branch
//! unwrapping, and curve embeddings `gamma(x) = int_0^x exp(phi)`.
//!
//! ```
//! use wpcurves::grid::make_grid;
//! use wpcurves::operators::{composition_bounds, probe_family, QuasisymmetricMap};
//!
//! let grid = make_grid(1024).unwrap();
//! let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.3 * t.sin()).unwrap();
//! let report = composition_bounds(&h, &probe_family(grid)).unwrap();
//! for row in &report.rows {
//!     // substitution makes C_h an isometry of W^1_1 ...
//!     assert!((row.w11_ratio - 1.0).abs() < 1e-6);
//!     // ... and the L_1 / W^2_1 ratios obey the distortion bounds
//!     assert!(row.l1_slack > -1e-8 && row.w21_slack > -1e-8);
//! }
//! ```

use crate::error::{Error, Result};
use crate::grid::{
    antiderivative_normalized, resample_compose, spectral_derivative, CircleGrid, Domain,
    GridFunction,
};
use crate::interp::CubicSpline;
use crate::norms;
use crate::spectral;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Strictly increasing self-map of the circle (degree one) or the line,
/// stored as samples of `h` and `h'` at the grid nodes.
///
/// `normalized` records whether the map fixes the reference points
/// (circle: the Cayley image of infinity, `h(0) = 0 mod 2pi`; line:
/// `h(0) = 0, h(1) = 1`) to within 1e-12. Maps that move them — rotations,
/// unnormalized weldings — are legal but tagged.
#[derive(Clone, Debug)]
pub struct QuasisymmetricMap {
    model: Domain,
    grid: CircleGrid,
    h: Vec<f64>,
    dh: Vec<f64>,
    normalized: bool,
}

impl QuasisymmetricMap {
    pub fn identity(grid: CircleGrid, model: Domain) -> Self {
        let h = match model {
            Domain::Circle => grid.thetas(),
            Domain::Line => grid.line_nodes(),
        };
        QuasisymmetricMap { model, grid, h, dh: vec![1.0; grid.n()], normalized: true }
    }

    /// Build from node samples; the derivative comes from the spectral
    /// calculus of `h(theta) - theta` (circle) or a shape-preserving spline
    /// (line).
    pub fn from_samples(grid: CircleGrid, model: Domain, h: Vec<f64>) -> Result<Self> {
        if h.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: h.len() });
        }
        for i in 1..h.len() {
            if h[i] <= h[i - 1] {
                return Err(Error::NonMonotone(i));
            }
        }
        let n = grid.n();
        let dh: Vec<f64> = match model {
            Domain::Circle => {
                if h[n - 1] - h[0] >= 2.0 * PI {
                    return Err(Error::NonMonotone(n - 1));
                }
                let u = GridFunction::new(
                    grid,
                    Domain::Circle,
                    h.iter()
                        .enumerate()
                        .map(|(j, &v)| Complex64::new(v - grid.theta(j), 0.0))
                        .collect(),
                )?;
                spectral_derivative(&u)?.values().iter().map(|v| v.re + 1.0).collect()
            }
            Domain::Line => {
                let xs = grid.line_nodes();
                let s = CubicSpline::new(&xs, &h)?;
                xs.iter().map(|&x| s.eval_derivative(x)).collect()
            }
        };
        if let Some(j) = dh.iter().position(|&d| d <= 0.0) {
            return Err(Error::VanishingDerivative(j));
        }
        let mut map = QuasisymmetricMap { model, grid, h, dh, normalized: false };
        map.normalized = map.check_normalized();
        Ok(map)
    }

    pub fn from_circle_fn(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        QuasisymmetricMap::from_samples(
            grid,
            Domain::Circle,
            grid.thetas().iter().map(|&t| f(t)).collect(),
        )
    }

    fn check_normalized(&self) -> bool {
        match self.model {
            Domain::Circle => self.eval(0.0).abs() <= 1e-12,
            Domain::Line => {
                self.eval(0.0).abs() <= 1e-12 && (self.eval(1.0) - 1.0).abs() <= 1e-12
            }
        }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn model(&self) -> Domain {
        self.model
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn derivative_values(&self) -> &[f64] {
        &self.dh
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn periodic_part_coeffs(&self) -> Vec<Complex64> {
        let u: Vec<Complex64> = self
            .h
            .iter()
            .enumerate()
            .map(|(j, &v)| Complex64::new(v - self.grid.theta(j), 0.0))
            .collect();
        spectral::coefficients(&u)
    }

    /// Evaluate the map off the nodes: trigonometric interpolation of the
    /// periodic part (circle) or monotone spline (line).
    pub fn eval(&self, x: f64) -> f64 {
        match self.model {
            Domain::Circle => x + spectral::eval(&self.periodic_part_coeffs(), x).re,
            Domain::Line => {
                let xs = self.grid.line_nodes();
                CubicSpline::new(&xs, &self.h).unwrap().eval(x)
            }
        }
    }

    /// Inverse map, sampled at the grid nodes by bracketed Newton iteration
    /// on the interpolant.
    pub fn inverse(&self) -> Result<QuasisymmetricMap> {
        let n = self.grid.n();
        match self.model {
            Domain::Circle => {
                let coeffs = self.periodic_part_coeffs();
                let at = |x: f64| x + spectral::eval(&coeffs, x).re;
                let dat = {
                    let dcoeffs: Vec<Complex64> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| {
                            let k = spectral::frequency(i, n);
                            if k == -(n as i64) / 2 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                c * Complex64::new(0.0, k as f64)
                            }
                        })
                        .collect();
                    move |x: f64| 1.0 + spectral::eval(&dcoeffs, x).re
                };
                let mut inv = Vec::with_capacity(n);
                for j in 0..n {
                    // solve h(x) = theta_j; h(x + 2pi) = h(x) + 2pi, so shift
                    // the target into [h_0, h_0 + 2pi) where the solution lies
                    // in [theta_0, theta_0 + 2pi), then shift back
                    let target = self.grid.theta(j);
                    let shift = ((target - self.h[0]) / (2.0 * PI)).floor();
                    let y = target - 2.0 * PI * shift;
                    // bracket among node values, extended by one node period
                    let i = self.h.partition_point(|&v| v <= y);
                    let (mut lo, mut hi) = if i == 0 {
                        (self.grid.theta(n - 1) - 2.0 * PI, self.grid.theta(0))
                    } else if i == n {
                        (self.grid.theta(n - 1), self.grid.theta(0) + 2.0 * PI)
                    } else {
                        (self.grid.theta(i - 1), self.grid.theta(i))
                    };
                    let mut x = 0.5 * (lo + hi);
                    for _ in 0..80 {
                        let v = at(x) - y;
                        if v.abs() < 1e-14 {
                            break;
                        }
                        if v > 0.0 {
                            hi = x;
                        } else {
                            lo = x;
                        }
                        let d = dat(x);
                        let newton = if d > 0.0 { x - v / d } else { f64::NAN };
                        x = if newton.is_finite() && newton > lo && newton < hi {
                            newton
                        } else {
                            0.5 * (lo + hi)
                        };
                    }
                    inv.push(x + 2.0 * PI * shift);
                }
                QuasisymmetricMap::from_samples(self.grid, Domain::Circle, inv)
            }
            Domain::Line => {
                let xs = self.grid.line_nodes();
                let s = CubicSpline::new(&xs, &self.h)?;
                let inv: Result<Vec<f64>> = xs.iter().map(|&x| s.invert(x)).collect();
                QuasisymmetricMap::from_samples(self.grid, Domain::Line, inv?)
            }
        }
    }

    /// Composition `self o other`, sampled at the nodes.
    pub fn compose(&self, other: &QuasisymmetricMap) -> Result<QuasisymmetricMap> {
        if self.model != other.model {
            return Err(Error::DomainMismatch {
                expected: self.model.name(),
                got: other.model.name(),
            });
        }
        let h = other.h.iter().map(|&x| self.eval(x)).collect();
        QuasisymmetricMap::from_samples(self.grid, self.model, h)
    }

    /// `log h'` as a real grid function.
    pub fn log_derivative(&self) -> Result<GridFunction> {
        if let Some(j) = self.dh.iter().position(|&d| d <= 0.0) {
            return Err(Error::VanishingDerivative(j));
        }
        GridFunction::new(
            self.grid,
            self.model,
            self.dh.iter().map(|&d| Complex64::new(d.ln(), 0.0)).collect(),
        )
    }
}

/// Curve embedding `gamma` together with its log-derivative data
/// `log gamma'(theta) = i*w*theta + phi(theta)` with `phi` periodic;
/// `w = 1` for closed curves in the circle model, `w = 0` for open arcs and
/// line-model embeddings.
#[derive(Clone, Debug)]
pub struct WPEmbedding {
    domain: Domain,
    phi: GridFunction,
    gamma: GridFunction,
    winding: i32,
}

impl WPEmbedding {
    /// Build from the periodic part of the log-derivative:
    /// `gamma' = e^{i w theta} e^{phi}`, `gamma(0) = 0`.
    pub fn from_log_derivative(phi: &GridFunction, winding: i32) -> Result<Self> {
        let grid = phi.grid();
        let dgamma = match phi.domain() {
            Domain::Circle => GridFunction::new(
                grid,
                Domain::Circle,
                (0..grid.n())
                    .map(|j| {
                        let t = grid.theta(j);
                        (phi.values()[j] + Complex64::new(0.0, winding as f64 * t)).exp()
                    })
                    .collect::<Vec<_>>(),
            )?,
            Domain::Line => {
                if winding != 0 {
                    return Err(Error::InvalidParameter(
                        "line-model embeddings have no winding".into(),
                    ));
                }
                phi.map(|v| v.exp())
            }
        };
        if dgamma.sup_norm() > 1e100 {
            return Err(Error::InvalidParameter("exp(phi) overflows".into()));
        }
        // gamma' has winding factored in; integrate on the sample grid
        let gamma = antiderivative_normalized(&dgamma)?;
        Ok(WPEmbedding { domain: phi.domain(), phi: phi.clone(), gamma, winding })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn grid(&self) -> CircleGrid {
        self.phi.grid()
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    /// Curve samples `gamma` at the nodes.
    pub fn curve(&self) -> &GridFunction {
        &self.gamma
    }

    /// Periodic part of `log gamma'`.
    pub fn periodic_part(&self) -> &GridFunction {
        &self.phi
    }

    /// `gamma'` at the nodes (stored form, no numerical differentiation).
    pub fn derivative_values(&self) -> Vec<Complex64> {
        let grid = self.phi.grid();
        (0..grid.n())
            .map(|j| {
                (self.phi.values()[j]
                    + Complex64::new(0.0, self.winding as f64 * grid.theta(j)))
                .exp()
            })
            .collect()
    }

    /// Full `log gamma'` samples, `i*w*theta_j + phi_j`.
    pub fn log_derivative(&self) -> GridFunction {
        let grid = self.phi.grid();
        GridFunction::new(
            grid,
            self.domain,
            (0..grid.n())
                .map(|j| {
                    self.phi.values()[j] + Complex64::new(0.0, self.winding as f64 * grid.theta(j))
                })
                .collect(),
        )
        .expect("stored samples are finite")
    }

    /// Whether the circle-model curve closes up (`oint gamma' = 0`).
    pub fn is_closed(&self) -> bool {
        self.domain == Domain::Circle
            && GridFunction::new(
                self.gamma.grid(),
                Domain::Circle,
                self.derivative_values(),
            )
            .map(|d| d.mean().norm() < 1e-8 * (1.0 + d.sup_norm()))
            .unwrap_or(false)
    }
}

/// `gamma(x) = int_0^x exp(f)`, the embedding with prescribed log-derivative
/// and zero winding.
pub fn exp_integral(f: &GridFunction) -> Result<WPEmbedding> {
    WPEmbedding::from_log_derivative(f, 0)
}

/// `C_h(f) = f o h`.
pub fn compose_operator(h: &QuasisymmetricMap, f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(h.model())?;
    resample_compose(f, h.values())
}

/// `Q_h(f) = C_h(f) + log h'`.
pub fn affine_translation(h: &QuasisymmetricMap, f: &GridFunction) -> Result<GridFunction> {
    Ok(compose_operator(h, f)?.add(&h.log_derivative()?))
}

/// Log-derivative of raw curve samples, with branch-continuous imaginary
/// part anchored at node 0. Circle curves are differentiated spectrally
/// (the samples must be periodic, i.e. the curve closed); line curves by
/// spline.
pub fn log_derivative_of_samples(gamma: &GridFunction) -> Result<GridFunction> {
    let n = gamma.n();
    let d: Vec<Complex64> = match gamma.domain() {
        Domain::Circle => spectral_derivative(gamma)?.values().to_vec(),
        Domain::Line => {
            let xs = gamma.grid().line_nodes();
            let re: Vec<f64> = gamma.values().iter().map(|v| v.re).collect();
            let im: Vec<f64> = gamma.values().iter().map(|v| v.im).collect();
            let sre = CubicSpline::new(&xs, &re)?;
            let sim = CubicSpline::new(&xs, &im)?;
            xs.iter()
                .map(|&x| Complex64::new(sre.eval_derivative(x), sim.eval_derivative(x)))
                .collect()
        }
    };
    let mut out = Vec::with_capacity(n);
    let mut prev_arg = 0.0;
    for (j, &v) in d.iter().enumerate() {
        if v.norm() < 1e-13 {
            return Err(Error::VanishingDerivative(j));
        }
        let mut arg = v.arg();
        if j > 0 {
            while arg - prev_arg > PI {
                arg -= 2.0 * PI;
            }
            while arg - prev_arg < -PI {
                arg += 2.0 * PI;
            }
            if (arg - prev_arg).abs() > PI {
                return Err(Error::BranchJump(j - 1, j));
            }
        }
        prev_arg = arg;
        out.push(Complex64::new(v.norm().ln(), arg));
    }
    GridFunction::new(gamma.grid(), gamma.domain(), out)
}

/// Per-probe operator ratios for [`composition_bounds`].
#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub l1_ratio: f64,
    pub w11_ratio: f64,
    pub w21_ratio: f64,
    /// bound minus measured ratio; nonnegative (within roundoff) when the
    /// inequality holds
    pub l1_slack: f64,
    pub w21_slack: f64,
}

/// Distortion bounds of a composition operator, measured on a probe family.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionBoundReport {
    /// `M = exp ||log h'||_inf`
    pub m: f64,
    /// `||log h'||_{W^1_1} = int |(log h')'|`
    pub w11_norm: f64,
    pub sup_log_dh: f64,
    pub rows: Vec<ProbeRow>,
}

/// Measure the composition-operator ratios `||phi o h|| / ||phi||` in `L_1`,
/// `W^1_1` and `W^2_1` on each probe, against the bounds `M`, `1` and
/// `M (1 + ||log h'||_{W^1_1})`.
pub fn composition_bounds(
    h: &QuasisymmetricMap,
    probes: &[GridFunction],
) -> Result<CompositionBoundReport> {
    let log_dh = h.log_derivative()?;
    let sup_log_dh = log_dh.sup_norm();
    let m = sup_log_dh.exp();
    let w11_norm = norms::boundary_seminorm(&log_dh, norms::NormKind::W11, 1.0)?.value;
    let bound_w21 = m * (1.0 + w11_norm);
    let mut rows = Vec::with_capacity(probes.len());
    for f in probes {
        let fh = compose_operator(h, f)?;
        let l1 = norms::lebesgue_norm(f, 1.0)?;
        let w11 = norms::boundary_seminorm(f, norms::NormKind::W11, 1.0)?.value;
        let w21 = norms::boundary_seminorm(f, norms::NormKind::W21, 1.0)?.value;
        let l1c = norms::lebesgue_norm(&fh, 1.0)?;
        let w11c = norms::boundary_seminorm(&fh, norms::NormKind::W11, 1.0)?.value;
        let w21c = norms::boundary_seminorm(&fh, norms::NormKind::W21, 1.0)?.value;
        let l1_ratio = l1c / l1;
        let w11_ratio = w11c / w11;
        let w21_ratio = w21c / w21;
        rows.push(ProbeRow {
            l1_ratio,
            w11_ratio,
            w21_ratio,
            l1_slack: m - l1_ratio,
            w21_slack: bound_w21 - w21_ratio,
        });
    }
    Ok(CompositionBoundReport { m, w11_norm, sup_log_dh, rows })
}

/// The fixed probe family used for operator-ratio measurements: ten
/// trigonometric modes and ten periodic bump functions.
pub fn probe_family(grid: CircleGrid) -> Vec<GridFunction> {
    let mut probes = Vec::with_capacity(20);
    for k in 1..=5 {
        probes.push(GridFunction::from_circle_fn(grid, |t| {
            Complex64::new((k as f64 * t).cos(), 0.0)
        }));
        probes.push(GridFunction::from_circle_fn(grid, |t| {
            Complex64::new((k as f64 * t).sin(), 0.0)
        }));
    }
    for i in 0..10 {
        let center = 2.0 * PI * i as f64 / 10.0 + 0.3;
        let width = 2.0 + (i % 3) as f64;
        probes.push(GridFunction::from_circle_fn(grid, |t| {
            Complex64::new((width * ((t - center).cos() - 1.0)).exp(), 0.0)
        }));
    }
    probes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_composition_is_identity() {
        let grid = make_grid(64).unwrap();
        let h = QuasisymmetricMap::identity(grid, Domain::Circle);
        assert!(h.is_normalized());
        let f = GridFunction::from_circle_fn(grid, |t| c(t.sin(), (2.0 * t).cos()));
        let g = compose_operator(&h, &f).unwrap();
        assert!(f.sub(&g).sup_norm() <= 1e-12);
    }

    #[test]
    fn rotation_shifts_exponential() {
        let grid = make_grid(128).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.4).unwrap();
        assert!(!h.is_normalized());
        let f = GridFunction::from_circle_fn(grid, |t| Complex64::from_polar(1.0, t));
        let g = compose_operator(&h, &f).unwrap();
        let expect = GridFunction::from_circle_fn(grid, |t| Complex64::from_polar(1.0, t + 0.4));
        assert!(g.sub(&expect).sup_norm() <= 1e-10);
    }

    #[test]
    fn composition_matches_pointwise_oracle() {
        let grid = make_grid(1024).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.2 * t.sin()).unwrap();
        let f = GridFunction::from_circle_fn(grid, |t| c(t.cos(), 0.0));
        let g = compose_operator(&h, &f).unwrap();
        let oracle =
            GridFunction::from_circle_fn(grid, |t| c((t + 0.2 * t.sin()).cos(), 0.0));
        assert!(g.sub(&oracle).sup_norm() <= 1e-8);
    }

    #[test]
    fn affine_translation_cases() {
        let grid = make_grid(64).unwrap();
        let id = QuasisymmetricMap::identity(grid, Domain::Circle);
        let f = GridFunction::from_circle_fn(grid, |t| c(t.cos(), t.sin()));
        assert!(affine_translation(&id, &f).unwrap().sub(&f).sup_norm() <= 1e-12);

        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.1 * t.sin()).unwrap();
        let zero = GridFunction::zero(grid, Domain::Circle);
        let out = affine_translation(&h, &zero).unwrap();
        assert!(out.sub(&h.log_derivative().unwrap()).sup_norm() <= 1e-12);
    }

    #[test]
    fn inverse_round_trip() {
        let grid = make_grid(256).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.3 * t.sin()).unwrap();
        let hinv = h.inverse().unwrap();
        let round = h.compose(&hinv).unwrap();
        let id = QuasisymmetricMap::identity(grid, Domain::Circle);
        let err: f64 = round
            .values()
            .iter()
            .zip(id.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9, "round-trip error {err}");
    }

    #[test]
    fn composition_operator_inverts() {
        let grid = make_grid(512).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.25 * t.sin()).unwrap();
        let hinv = h.inverse().unwrap();
        let f = GridFunction::from_circle_fn(grid, |t| c((2.0 * t).cos(), t.sin()));
        let round = compose_operator(&hinv, &compose_operator(&h, &f).unwrap()).unwrap();
        assert!(round.sub(&f).sup_norm() <= 1e-7);
    }

    #[test]
    fn log_derivative_round_trip_on_closed_curve() {
        let grid = make_grid(1024).unwrap();
        // gamma' = e^{i theta}(1 + 0.4 e^{i theta}) has zero mean: closed curve
        let phi = GridFunction::from_circle_fn(grid, |t| {
            (Complex64::new(1.0, 0.0) + 0.4 * Complex64::from_polar(1.0, t)).ln()
        });
        let emb = WPEmbedding::from_log_derivative(&phi, 1).unwrap();
        assert!(emb.is_closed());
        assert!(emb
            .log_derivative()
            .sub(&phi)
            .zip(&GridFunction::from_circle_fn(grid, |t| c(0.0, t)), |a, b| a - b)
            .sup_norm()
            <= 1e-12);
        // numerical re-differentiation of the stored curve samples agrees
        let num = log_derivative_of_samples(emb.curve()).unwrap();
        assert!(num.sub(&emb.log_derivative()).sup_norm() <= 1e-9);
    }

    #[test]
    fn exp_integral_trivial_cases() {
        let grid = make_grid(64).unwrap();
        let zero = GridFunction::zero(grid, Domain::Line);
        let id = exp_integral(&zero).unwrap();
        for (j, &g) in id.curve().values().iter().enumerate() {
            let x = grid.line_node(j);
            assert!((g - c(x, 0.0)).norm() <= 1e-9 * (1.0 + x.abs()), "node {j}");
        }

        let two = GridFunction::new(grid, Domain::Circle, vec![c(2f64.ln(), 0.0); 64]).unwrap();
        let d = exp_integral(&two).unwrap();
        for (j, &g) in d.curve().values().iter().enumerate() {
            assert!((g - c(2.0 * grid.theta(j), 0.0)).norm() <= 1e-10);
        }
    }

    #[test]
    fn unimodular_log_derivative_gives_unit_speed() {
        let grid = make_grid(256).unwrap();
        let phi = GridFunction::from_circle_fn(grid, |t| c(0.0, 0.3 * t.sin()));
        let emb = exp_integral(&phi).unwrap();
        for d in emb.derivative_values() {
            assert!((d.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn closed_curve_embedding_closes() {
        let grid = make_grid(256).unwrap();
        let phi = GridFunction::zero(grid, Domain::Circle);
        let circle = WPEmbedding::from_log_derivative(&phi, 1).unwrap();
        assert!(circle.is_closed());
        // gamma(theta) = -i e^{i theta} + const; check |gamma - center| = 1
        let center = circle.curve().mean();
        for &g in circle.curve().values() {
            assert!(((g - center).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn chain_rule_for_log_derivatives() {
        let grid = make_grid(1024).unwrap();
        // closed curve so the reparameterized samples stay periodic
        let phi = GridFunction::from_circle_fn(grid, |t| {
            (Complex64::new(1.0, 0.0) + 0.3 * Complex64::from_polar(1.0, t)).ln()
        });
        let gamma1 = WPEmbedding::from_log_derivative(&phi, 1).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.15 * t.sin()).unwrap();
        let composed = compose_operator(&h, gamma1.curve()).unwrap();
        let lhs = log_derivative_of_samples(&composed).unwrap();
        // log (gamma o h)' = i h + phi o h + log h'
        let winding = GridFunction::new(
            grid,
            Domain::Circle,
            h.values().iter().map(|&x| c(0.0, x)).collect(),
        )
        .unwrap();
        let rhs = compose_operator(&h, gamma1.periodic_part())
            .unwrap()
            .add(&winding)
            .add(&h.log_derivative().unwrap());
        assert!(lhs.sub(&rhs).sup_norm() <= 1e-7);
    }

    #[test]
    fn affine_translation_group_law() {
        let grid = make_grid(512).unwrap();
        let h1 = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.1 * t.sin()).unwrap();
        let h2 = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.12 * (2.0 * t).sin()).unwrap();
        let f = GridFunction::from_circle_fn(grid, |t| c(t.cos(), 0.0));
        let lhs = affine_translation(&h2, &affine_translation(&h1, &f).unwrap()).unwrap();
        let rhs = affine_translation(&h1.compose(&h2).unwrap(), &f).unwrap();
        assert!(lhs.sub(&rhs).sup_norm() <= 1e-7);
    }

    #[test]
    fn identity_composition_bounds_are_unity() {
        let grid = make_grid(256).unwrap();
        let id = QuasisymmetricMap::identity(grid, Domain::Circle);
        let probes = probe_family(grid);
        let report = composition_bounds(&id, &probes).unwrap();
        assert!((report.m - 1.0).abs() <= 1e-12);
        for row in &report.rows {
            assert!((row.l1_ratio - 1.0).abs() <= 1e-10);
            assert!((row.w11_ratio - 1.0).abs() <= 1e-10);
            assert!((row.w21_ratio - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn composition_bounds_hold_with_slack() {
        let grid = make_grid(1024).unwrap();
        let h = QuasisymmetricMap::from_circle_fn(grid, |t| t + 0.2 * t.sin()).unwrap();
        let probes = probe_family(grid);
        let report = composition_bounds(&h, &probes).unwrap();
        assert!(report.m <= report.w11_norm.exp() * (1.0 + 1e-10));
        assert!(report.sup_log_dh <= report.w11_norm + 1e-8);
        for row in &report.rows {
            assert!((row.w11_ratio - 1.0).abs() <= 1e-6, "w11 ratio {}", row.w11_ratio);
            assert!(row.l1_slack >= -1e-8, "l1 slack {}", row.l1_slack);
            assert!(row.w21_slack >= -1e-8, "w21 slack {}", row.w21_slack);
        }
    }

    #[test]
    fn non_monotone_samples_rejected() {
        let grid = make_grid(16).unwrap();
        let mut h = grid.thetas();
        h.swap(5, 6);
        assert!(matches!(
            QuasisymmetricMap::from_samples(grid, Domain::Circle, h),
            Err(Error::NonMonotone(_))
        ));
    }
}
