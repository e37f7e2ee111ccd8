//! Forward conformal welding on starlike analytic curves: schlicht test
//! families, interior/exterior Riemann boundary correspondences by
//! Theodorsen iteration, extraction of the welding homeomorphism
//! `h = f2^{-1} o f1`, pre-Schwarzian/Schwarzian data, and arc-length
//! decomposition of curve embeddings.
//!
//! ```
//! use wpcurves::grid::make_grid;
//! use wpcurves::welding::{conformal_weld, SchlichtCurve};
//! use num_complex::Complex64;
//!
//! let curve = SchlichtCurve::new(vec![Complex64::new(0.2, 0.0)]).unwrap();
//! let w = conformal_weld(&curve, make_grid(256).unwrap()).unwrap();
//! // the welding identity log f2' o h + log h' = log f1' holds at the nodes
//! assert!(w.residual < 1e-8);
//! ```

use crate::error::{Error, Result};
use crate::grid::{
    antiderivative_normalized, CircleGrid, Domain, GridFunction,
};
use crate::interp::CubicSpline;
use crate::operators::{QuasisymmetricMap, WPEmbedding};
use crate::spectral;
use crate::transforms::hilbert_circle;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Univalent polynomial `F1(w) = w + sum_{k>=2} c_k w^k` under the
/// coefficient condition `sum k |c_k| < 1`, with a numerical injectivity
/// certificate (minimum pairwise difference quotient on a boundary grid).
#[derive(Clone, Debug)]
pub struct SchlichtCurve {
    coeffs: Vec<Complex64>,
    certificate: f64,
}

impl SchlichtCurve {
    /// `coeffs[0]` is `c_2`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let sum: f64 = coeffs.iter().enumerate().map(|(i, c)| (i + 2) as f64 * c.norm()).sum();
        if sum >= 1.0 {
            return Err(Error::NotUnivalent(sum));
        }
        let m = 128;
        let pts: Vec<Complex64> = (0..m)
            .map(|j| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / m as f64);
                (w, w)
            })
            .map(|(w, _)| w)
            .collect();
        let vals: Vec<Complex64> = pts.iter().map(|&w| eval_schlicht(&coeffs, w)).collect();
        let mut certificate = f64::INFINITY;
        for i in 0..m {
            for j in i + 1..m {
                let q = (vals[i] - vals[j]).norm() / (pts[i] - pts[j]).norm();
                certificate = certificate.min(q);
            }
        }
        if certificate <= 1e-9 {
            return Err(Error::NotInjective(certificate));
        }
        Ok(SchlichtCurve { coeffs, certificate })
    }

    pub fn certificate(&self) -> f64 {
        self.certificate
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        eval_schlicht(&self.coeffs, w)
    }

    /// `F1'(w)`.
    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i + 2) as f64;
            d += c * k * w.powu((i + 1) as u32);
        }
        d
    }

    fn second_derivative(&self, w: Complex64) -> Complex64 {
        let mut d = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i + 2) as f64;
            d += c * k * (k - 1.0) * w.powu(i as u32);
        }
        d
    }

    fn third_derivative(&self, w: Complex64) -> Complex64 {
        let mut d = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let k = (i + 2) as f64;
            d += c * k * (k - 1.0) * (k - 2.0) * w.powu((i - 1) as u32);
        }
        d
    }
}

fn eval_schlicht(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    let mut v = w;
    let mut wk = w;
    for &c in coeffs {
        wk *= w;
        v += c * wk;
    }
    v
}

/// Closed curve sampled on a circle grid, with exact tangent data.
#[derive(Clone, Debug)]
pub struct CurveSamples {
    pub gamma: GridFunction,
    /// `d gamma / d theta` at the nodes
    pub tangent: GridFunction,
}

impl CurveSamples {
    /// Boundary samples of a schlicht map: `gamma = F1(e^{i theta})`,
    /// tangent `F1'(e^{i theta}) i e^{i theta}`.
    pub fn from_schlicht(curve: &SchlichtCurve, grid: CircleGrid) -> Self {
        let gamma = GridFunction::from_circle_fn(grid, |t| {
            curve.eval(Complex64::from_polar(1.0, t))
        });
        let tangent = GridFunction::from_circle_fn(grid, |t| {
            let w = Complex64::from_polar(1.0, t);
            curve.derivative(w) * Complex64::i() * w
        });
        CurveSamples { gamma, tangent }
    }

    /// Curve of a closed embedding, recentered so the origin lies inside
    /// (the sample centroid is subtracted).
    pub fn from_embedding(emb: &WPEmbedding) -> Result<Self> {
        if emb.domain() != Domain::Circle {
            return Err(Error::DomainMismatch { expected: "circle", got: "line" });
        }
        let center = emb.curve().mean();
        let gamma = emb.curve().map(|v| v - center);
        let tangent = GridFunction::new(
            emb.grid(),
            Domain::Circle,
            emb.derivative_values(),
        )?;
        Ok(CurveSamples { gamma, tangent })
    }

    pub fn grid(&self) -> CircleGrid {
        self.gamma.grid()
    }
}

/// Build a schlicht curve and its boundary samples in one step.
pub fn curve_from_schlicht(
    coeffs: Vec<Complex64>,
    grid: CircleGrid,
) -> Result<(SchlichtCurve, CurveSamples)> {
    let curve = SchlichtCurve::new(coeffs)?;
    let samples = CurveSamples::from_schlicht(&curve, grid);
    Ok((curve, samples))
}

/// Polar data of a starlike curve: unwrapped polar angle and log-radius at
/// the nodes, plus periodically extended splines for off-node evaluation.
struct PolarData {
    /// `log rho` as a function of the polar angle
    log_rho: CubicSpline,
    /// curve parameter as a function of the polar angle (inverse of `Phi`)
    param_of_angle: CubicSpline,
    /// contraction modulus `sup |d log rho / d Phi|`
    epsilon: f64,
}

fn polar_data(curve: &CurveSamples) -> Result<PolarData> {
    let n = curve.grid().n();
    let v = curve.gamma.values();
    let mut phis = Vec::with_capacity(n);
    let mut logr = Vec::with_capacity(n);
    let mut prev = 0.0;
    for (j, &z) in v.iter().enumerate() {
        let r = z.norm();
        if r < 1e-12 {
            return Err(Error::NotStarlike(format!("curve passes through the origin at node {j}")));
        }
        let mut a = z.arg();
        if j > 0 {
            while a - prev > PI {
                a -= 2.0 * PI;
            }
            while a - prev < -PI {
                a += 2.0 * PI;
            }
            if a <= prev {
                return Err(Error::NotStarlike(format!(
                    "polar angle not increasing at node {j}"
                )));
            }
        }
        prev = a;
        phis.push(a);
        logr.push(r.ln());
    }
    if (phis[n - 1] - phis[0]) >= 2.0 * PI {
        return Err(Error::NotStarlike("polar angle wraps more than once".into()));
    }
    // periodic extension by one full copy on each side
    let mut xp = Vec::with_capacity(3 * n);
    let mut yr = Vec::with_capacity(3 * n);
    let mut yt = Vec::with_capacity(3 * n);
    let thetas = curve.grid().thetas();
    for copy in -1i32..=1 {
        for j in 0..n {
            xp.push(phis[j] + copy as f64 * 2.0 * PI);
            yr.push(logr[j]);
            yt.push(thetas[j] + copy as f64 * 2.0 * PI);
        }
    }
    let log_rho = CubicSpline::new(&xp, &yr)?;
    let param_of_angle = CubicSpline::new(&xp, &yt)?;
    let epsilon = phis
        .iter()
        .map(|&p| log_rho.eval_derivative(p).abs())
        .fold(0.0, f64::max);
    if epsilon >= 1.0 {
        return Err(Error::NonContraction(format!(
            "sup |d log rho / d phi| = {epsilon:.3} >= 1"
        )));
    }
    Ok(PolarData { log_rho, param_of_angle, epsilon })
}

fn theodorsen(curve: &CurveSamples, exterior: bool) -> Result<QuasisymmetricMap> {
    let grid = curve.grid();
    let n = grid.n();
    let data = polar_data(curve)?;
    let thetas = grid.thetas();
    let mut phi = thetas.clone();
    let mut converged = false;
    for _ in 0..200 {
        let u = GridFunction::new(
            grid,
            Domain::Circle,
            phi.iter().map(|&p| Complex64::new(data.log_rho.eval(p), 0.0)).collect(),
        )?;
        let hu = hilbert_circle(&u)?;
        let mut delta = 0.0f64;
        for j in 0..n {
            let next = if exterior {
                thetas[j] - hu.values()[j].re
            } else {
                thetas[j] + hu.values()[j].re
            };
            delta = delta.max((next - phi[j]).abs());
            phi[j] = next;
        }
        if delta < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonContraction(format!(
            "Theodorsen iteration stalled (epsilon = {:.3})",
            data.epsilon
        )));
    }
    // convert polar angles to curve parameters; keep the branch on which the
    // correspondence stays increasing with span < 2pi
    let mut g: Vec<f64> = phi.iter().map(|&p| data.param_of_angle.eval(p)).collect();
    for i in 1..n {
        while g[i] <= g[i - 1] {
            g[i] += 2.0 * PI;
        }
    }
    QuasisymmetricMap::from_samples(grid, Domain::Circle, g)
}

/// Boundary correspondence of the exterior Riemann map (`infinity` fixed,
/// positive derivative there): returns `g` with `F2(e^{i theta}) = gamma(g(theta))`.
pub fn riemann_map_exterior(curve: &CurveSamples) -> Result<QuasisymmetricMap> {
    theodorsen(curve, true)
}

/// Boundary correspondence of the interior Riemann map (`0` fixed inside,
/// positive derivative at 0).
pub fn riemann_map_interior(curve: &CurveSamples) -> Result<QuasisymmetricMap> {
    theodorsen(curve, false)
}

/// Output of [`conformal_weld`].
#[derive(Clone, Debug)]
pub struct WeldingResult {
    /// interior boundary correspondence (identity: the schlicht map itself
    /// is the interior Riemann map)
    pub f1: QuasisymmetricMap,
    /// exterior boundary correspondence
    pub f2: QuasisymmetricMap,
    /// welding homeomorphism `h = f2^{-1} o f1`
    pub h: QuasisymmetricMap,
    /// `log h'` at the nodes
    pub log_h_deriv: GridFunction,
    /// `sup | log f2' o h + log h' - log f1' |` at the nodes
    pub residual: f64,
}

/// Conformal welding of a schlicht curve: the schlicht map is the interior
/// Riemann map, the exterior map comes from Theodorsen iteration, and the
/// welding residual measures the identity
/// `log f2' o h + log h' = log f1'`.
pub fn conformal_weld(curve: &SchlichtCurve, grid: CircleGrid) -> Result<WeldingResult> {
    let samples = CurveSamples::from_schlicht(curve, grid);
    let g = riemann_map_exterior(&samples)?;
    let h = g.inverse()?;
    let n = grid.n();
    let thetas = grid.thetas();

    // log f1'(theta) = log F1'(e^{i theta}) + i(theta + pi/2), exact
    let lg1: Vec<Complex64> = thetas
        .iter()
        .map(|&t| {
            let w = Complex64::from_polar(1.0, t);
            curve.derivative(w).ln() + Complex64::new(0.0, t + PI / 2.0)
        })
        .collect();

    // log f2'(theta) = log gamma'(g(theta)) + log g'(theta); gamma' is exact
    // at the off-node points g(theta_j)
    let mut lg2_periodic = Vec::with_capacity(n);
    for j in 0..n {
        let x = g.values()[j];
        let w = Complex64::from_polar(1.0, x);
        let dgamma = curve.derivative(w) * Complex64::i() * w;
        let lf2 = dgamma.ln() + Complex64::new(g.derivative_values()[j].ln(), 0.0);
        // remove the winding term i*theta to obtain a periodic sample set;
        // dgamma.ln() uses the principal branch, consistent for the curve
        // families here (F1' stays near 1)
        let mut p = lf2 - Complex64::new(0.0, thetas[j]);
        // principal-branch jumps of ln(i e^{ix}) as x crosses the branch cut
        while p.im > PI {
            p -= Complex64::new(0.0, 2.0 * PI);
        }
        while p.im < -PI {
            p += Complex64::new(0.0, 2.0 * PI);
        }
        lg2_periodic.push(p);
    }
    let lg2 = GridFunction::new(grid, Domain::Circle, lg2_periodic)?;
    let lg2_coeffs = lg2.coefficients();

    let log_h_deriv = h.log_derivative()?;
    let mut residual = 0.0f64;
    let mut res_values = Vec::with_capacity(n);
    for j in 0..n {
        let hj = h.values()[j];
        let lf2_at_h = spectral::eval(&lg2_coeffs, hj) + Complex64::new(0.0, hj);
        let r = lf2_at_h + log_h_deriv.values()[j] - lg1[j];
        residual = residual.max(r.norm());
        res_values.push(r);
    }
    Ok(WeldingResult {
        f1: QuasisymmetricMap::identity(grid, Domain::Circle),
        f2: g,
        h,
        log_h_deriv,
        residual,
    })
}

/// Pre-Schwarzian and Schwarzian boundary traces of a schlicht map, by exact
/// coefficient differentiation: `log F'` and
/// `S_F = F'''/F' - (3/2)(F''/F')^2` at `e^{i theta}`.
pub fn derivative_data(curve: &SchlichtCurve, grid: CircleGrid) -> (GridFunction, GridFunction) {
    let pre = GridFunction::from_circle_fn(grid, |t| {
        curve.derivative(Complex64::from_polar(1.0, t)).ln()
    });
    let schwarzian = GridFunction::from_circle_fn(grid, |t| {
        let w = Complex64::from_polar(1.0, t);
        let d1 = curve.derivative(w);
        let d2 = curve.second_derivative(w);
        let d3 = curve.third_derivative(w);
        d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1)
    });
    (pre, schwarzian)
}

/// Schwarzian from sampled `log F'` on the circle, via spectral derivatives
/// and the chain rule `d/dw = e^{-i theta} / i * d/d theta`.
pub fn schwarzian_from_log_derivative(log_fp: &GridFunction) -> Result<GridFunction> {
    log_fp.expect_domain(Domain::Circle)?;
    let grid = log_fp.grid();
    let dtheta = crate::grid::spectral_derivative(log_fp)?;
    let u = GridFunction::new(
        grid,
        Domain::Circle,
        (0..grid.n())
            .map(|j| {
                let w = Complex64::from_polar(1.0, grid.theta(j));
                dtheta.values()[j] / (Complex64::i() * w)
            })
            .collect(),
    )?;
    let du = crate::grid::spectral_derivative(&u)?;
    GridFunction::new(
        grid,
        Domain::Circle,
        (0..grid.n())
            .map(|j| {
                let w = Complex64::from_polar(1.0, grid.theta(j));
                du.values()[j] / (Complex64::i() * w) - 0.5 * u.values()[j] * u.values()[j]
            })
            .collect(),
    )
}

/// Result of [`arc_length_decompose`].
#[derive(Clone, Debug)]
pub struct ArcLengthDecomposition {
    /// constant-speed reparameterization of the curve
    pub gamma0: WPEmbedding,
    /// parameter change with `gamma = gamma0 o h`
    pub h: QuasisymmetricMap,
    /// `sup |gamma0(h(theta)) - gamma(theta)|`
    pub residual: f64,
    /// constant speed `|gamma0'|` (total length / 2 pi on the circle)
    pub speed: f64,
}

/// Evaluate an embedding's curve off the nodes: linear drift plus
/// trigonometric interpolation of the periodic remainder.
fn eval_curve(emb: &WPEmbedding, x: f64) -> Complex64 {
    let grid = emb.grid();
    let drift = GridFunction::new(grid, Domain::Circle, emb.derivative_values())
        .expect("finite")
        .mean();
    let periodic = GridFunction::new(
        grid,
        Domain::Circle,
        (0..grid.n())
            .map(|j| emb.curve().values()[j] - drift * grid.theta(j))
            .collect(),
    )
    .expect("finite");
    spectral::eval(&periodic.coefficients(), x) + drift * x
}

/// Split `gamma = gamma0 o h` with `gamma0` of constant speed
/// (`log gamma0'` has constant real part) and `h` the increasing
/// reparameterization built from `|gamma'| = exp(Re log gamma')`.
pub fn arc_length_decompose(gamma: &WPEmbedding) -> Result<ArcLengthDecomposition> {
    let grid = gamma.grid();
    let n = grid.n();
    let phi = gamma.periodic_part();
    match gamma.domain() {
        Domain::Circle => {
            let speed_fn = GridFunction::new(
                grid,
                Domain::Circle,
                phi.values().iter().map(|v| Complex64::new(v.re.exp(), 0.0)).collect(),
            )?;
            let c = speed_fn.mean().re;
            let s = antiderivative_normalized(&speed_fn)?;
            let h_samples: Vec<f64> = s.values().iter().map(|v| v.re / c).collect();
            let h = QuasisymmetricMap::from_samples(grid, Domain::Circle, h_samples)?;
            let hinv = h.inverse()?;
            let w = gamma.winding();
            let im_coeffs = phi.map(|v| Complex64::new(v.im, 0.0)).coefficients();
            let psi: Vec<Complex64> = (0..n)
                .map(|j| {
                    let x = hinv.values()[j];
                    let im = spectral::eval(&im_coeffs, x).re;
                    Complex64::new(c.ln(), im + w as f64 * (x - grid.theta(j)))
                })
                .collect();
            let psi = GridFunction::new(grid, Domain::Circle, psi)?;
            let gamma0 = WPEmbedding::from_log_derivative(&psi, w)?;
            let mut residual = 0.0f64;
            for j in 0..n {
                let r = (eval_curve(&gamma0, h.values()[j]) - gamma.curve().values()[j]).norm();
                residual = residual.max(r);
            }
            Ok(ArcLengthDecomposition { gamma0, h, residual, speed: c })
        }
        Domain::Line => {
            let xs = grid.line_nodes();
            let speed_fn = GridFunction::new(
                grid,
                Domain::Line,
                phi.values().iter().map(|v| Complex64::new(v.re.exp(), 0.0)).collect(),
            )?;
            let s = antiderivative_normalized(&speed_fn)?;
            let h_samples: Vec<f64> = s.values().iter().map(|v| v.re).collect();
            let (h_lo, h_hi) = (h_samples[0], h_samples[n - 1]);
            let spline = CubicSpline::new(&xs, &h_samples)?;
            let h = QuasisymmetricMap::from_samples(grid, Domain::Line, h_samples)?;
            let im: Vec<f64> = phi.values().iter().map(|v| v.im).collect();
            let im_spline = CubicSpline::new(&xs, &im)?;
            let psi: Vec<Complex64> = xs
                .iter()
                .map(|&x| {
                    let y = x.clamp(h_lo, h_hi);
                    let t = spline.invert(y).unwrap_or(x);
                    Complex64::new(0.0, im_spline.eval(t))
                })
                .collect();
            let psi = GridFunction::new(grid, Domain::Line, psi)?;
            let gamma0 = crate::operators::exp_integral(&psi)?;
            // residual via spline evaluation of gamma0 at h(x_j)
            let g0 = gamma0.curve();
            let g0re: Vec<f64> = g0.values().iter().map(|v| v.re).collect();
            let g0im: Vec<f64> = g0.values().iter().map(|v| v.im).collect();
            let sre = CubicSpline::new(&xs, &g0re)?;
            let sim = CubicSpline::new(&xs, &g0im)?;
            let mut residual = 0.0f64;
            for j in 1..n - 1 {
                let y = h.values()[j];
                if y < xs[0] || y > xs[n - 1] {
                    continue;
                }
                let v = Complex64::new(sre.eval(y), sim.eval(y));
                residual = residual.max((v - gamma.curve().values()[j]).norm());
            }
            Ok(ArcLengthDecomposition { gamma0, h, residual, speed: 1.0 })
        }
    }
}
