//! Beurling-Ahlfors extension of line homeomorphisms, complex dilatation,
//! hyperbolic L_p norms of Beltrami coefficients, and the local
//! Teichmuller-Wittich-Belinskii integral.
//!
//! ```
//! use wpcurves::grid::{make_grid, Domain};
//! use wpcurves::operators::QuasisymmetricMap;
//! use wpcurves::quasiconformal::{beurling_ahlfors_extend, complex_dilatation, BoxSpec};
//!
//! // the extension of an affine map is conformal: dilatation ~ 0
//! let grid = make_grid(512).unwrap();
//! let samples = grid.line_nodes().iter().map(|&x| 2.0 * x - 1.0).collect();
//! let h = QuasisymmetricMap::from_samples(grid, Domain::Line, samples).unwrap();
//! let spec = BoxSpec { x_min: -1.0, x_max: 1.0, y_max: 0.5, nx: 21, ny: 11 };
//! let mu = complex_dilatation(&beurling_ahlfors_extend(&h, &spec).unwrap()).unwrap();
//! assert!(mu.sup() < 1e-10);
//! ```

use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::interp::CubicSpline;
use crate::operators::QuasisymmetricMap;
use crate::quadrature::gauss_legendre_on;
use num_complex::Complex64;

/// Sampled Beltrami coefficient on a half-plane box. Samples are
/// cell-centered: `x`/`y` list the cell centers, cell edges sit midway
/// between neighbors (extended symmetrically at the ends). `y` must be
/// positive and increasing.
#[derive(Clone, Debug)]
pub struct BeltramiField {
    x: Vec<f64>,
    y: Vec<f64>,
    /// row-major: `mu[j * nx + i]` at `(x[i], y[j])`
    mu: Vec<Complex64>,
}

impl BeltramiField {
    pub fn new(x: Vec<f64>, y: Vec<f64>, mu: Vec<Complex64>) -> Result<Self> {
        if mu.len() != x.len() * y.len() || x.is_empty() || y.is_empty() {
            return Err(Error::LengthMismatch { expected: x.len() * y.len(), got: mu.len() });
        }
        for i in 1..x.len() {
            if x[i] <= x[i - 1] {
                return Err(Error::NonMonotone(i));
            }
        }
        for j in 1..y.len() {
            if y[j] <= y[j - 1] {
                return Err(Error::NonMonotone(j));
            }
        }
        if y[0] <= 0.0 {
            return Err(Error::InvalidParameter("y samples must be positive".into()));
        }
        if let Some(j) = mu.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(j));
        }
        let sup = mu.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if sup >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "Beltrami coefficient must satisfy sup|mu| < 1, got {sup}"
            )));
        }
        Ok(BeltramiField { x, y, mu })
    }

    pub fn from_fn(
        x: Vec<f64>,
        y: Vec<f64>,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut mu = Vec::with_capacity(x.len() * y.len());
        for &yy in &y {
            for &xx in &x {
                mu.push(f(xx, yy));
            }
        }
        BeltramiField::new(x, y, mu)
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn values(&self) -> &[Complex64] {
        &self.mu
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.mu[j * self.x.len() + i]
    }

    pub fn sup(&self) -> f64 {
        self.mu.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn edges(centers: &[f64], clamp_low: Option<f64>) -> Vec<f64> {
        let n = centers.len();
        let mut e = Vec::with_capacity(n + 1);
        let first = centers[0] - 0.5 * (centers[1.min(n - 1)] - centers[0]).max(0.0);
        e.push(match clamp_low {
            Some(lo) => first.max(lo),
            None => first,
        });
        for i in 1..n {
            e.push(0.5 * (centers[i - 1] + centers[i]));
        }
        e.push(centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2.min(n - 1)]));
        e
    }

    pub fn x_edges(&self) -> Vec<f64> {
        Self::edges(&self.x, None)
    }

    pub fn y_edges(&self) -> Vec<f64> {
        // the bottom edge may not cross y = 0 where the weight is singular
        Self::edges(&self.y, Some(self.y[0] * 0.5))
    }
}

/// Sampled planar map on a half-plane box; row `y = 0` carries the boundary
/// homeomorphism.
#[derive(Clone, Debug)]
pub struct PlanarMapGrid {
    x: Vec<f64>,
    y: Vec<f64>,
    /// row-major: `values[j * nx + i]`
    values: Vec<Complex64>,
}

impl PlanarMapGrid {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.x.len() + i]
    }
}

/// Half-plane box for the extension: `[x_min, x_max] x [0, y_max]` with
/// `nx x ny` nodes (row 0 is the boundary).
#[derive(Clone, Copy, Debug)]
pub struct BoxSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

/// Beurling-Ahlfors extension
/// `H(x+iy) = 1/2 int_0^1 [h(x+ty) + h(x-ty)] dt + i int_0^1 [h(x+ty) - h(x-ty)] dt`.
/// The un-halved imaginary part makes affine boundary maps extend to affine
/// planar maps (`mu = 0`).
pub fn beurling_ahlfors_extend(
    h: &QuasisymmetricMap,
    spec: &BoxSpec,
) -> Result<PlanarMapGrid> {
    h.log_derivative()?.expect_domain(Domain::Line)?;
    if spec.nx < 3 || spec.ny < 3 {
        return Err(Error::InvalidParameter("box needs at least 3x3 nodes".into()));
    }
    let xs = h.grid().line_nodes();
    let n = xs.len();
    if spec.x_min - spec.y_max < xs[0] || spec.x_max + spec.y_max > xs[n - 1] {
        return Err(Error::BoxOutOfRange);
    }
    let spline = CubicSpline::new(&xs, h.values())?;
    let (ts, ws) = gauss_legendre_on(48, 0.0, 1.0);
    let x: Vec<f64> = (0..spec.nx)
        .map(|i| spec.x_min + (spec.x_max - spec.x_min) * i as f64 / (spec.nx - 1) as f64)
        .collect();
    let y: Vec<f64> = (0..spec.ny)
        .map(|j| spec.y_max * j as f64 / (spec.ny - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    for &yy in &y {
        for &xx in &x {
            if yy == 0.0 {
                values.push(Complex64::new(spline.eval(xx), 0.0));
                continue;
            }
            let mut alpha = 0.0;
            let mut beta = 0.0;
            for (&t, &w) in ts.iter().zip(&ws) {
                let hp = spline.eval(xx + t * yy);
                let hm = spline.eval(xx - t * yy);
                alpha += w * (hp + hm);
                beta += w * (hp - hm);
            }
            values.push(Complex64::new(0.5 * alpha, beta));
        }
    }
    Ok(PlanarMapGrid { x, y, values })
}

/// Complex dilatation `mu = H_zbar / H_z` by central differences on the
/// interior nodes.
pub fn complex_dilatation(map: &PlanarMapGrid) -> Result<BeltramiField> {
    let nx = map.x.len();
    let ny = map.y.len();
    if nx < 3 || ny < 3 {
        return Err(Error::InvalidParameter("dilatation needs a 3x3 interior margin".into()));
    }
    let mut mu = Vec::with_capacity((nx - 2) * (ny - 2));
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let hx = (map.at(i + 1, j) - map.at(i - 1, j)) / (map.x[i + 1] - map.x[i - 1]);
            let hy = (map.at(i, j + 1) - map.at(i, j - 1)) / (map.y[j + 1] - map.y[j - 1]);
            let hz = 0.5 * (hx - Complex64::i() * hy);
            let hzbar = 0.5 * (hx + Complex64::i() * hy);
            if hz.norm() < 1e-10 {
                return Err(Error::DegenerateJacobian(i, j));
            }
            if hz.norm_sqr() - hzbar.norm_sqr() <= 0.0 {
                return Err(Error::DegenerateJacobian(i, j));
            }
            mu.push(hzbar / hz);
        }
    }
    BeltramiField::new(
        map.x[1..nx - 1].to_vec(),
        map.y[1..ny - 1].to_vec(),
        mu,
    )
}

/// Hyperbolic norm `(int |mu|^p y^-2 dx dy)^{1/p}` over the sampled box,
/// together with `sup |mu|`. The per-cell `y`-integral of the weight is
/// exact (`dx * (1/y_lo - 1/y_hi)`), so cell-aligned indicator fields
/// integrate nearly exactly.
pub fn hyperbolic_lp_norm(mu: &BeltramiField, p: f64) -> Result<(f64, f64)> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p must satisfy p >= 1, got {p}")));
    }
    let xe = mu.x_edges();
    let ye = mu.y_edges();
    let sup = mu.sup();
    let mut acc = 0.0;
    let mut boundary_mass = 0.0f64;
    for j in 0..mu.ny() {
        let wy = 1.0 / ye[j] - 1.0 / ye[j + 1];
        for i in 0..mu.nx() {
            let v = mu.at(i, j).norm();
            acc += v.powf(p) * (xe[i + 1] - xe[i]) * wy;
            if i == 0 || i + 1 == mu.nx() || j + 1 == mu.ny() {
                boundary_mass = boundary_mass.max(v);
            }
        }
    }
    if sup > 0.0 && boundary_mass > 1e-8 * sup {
        log::warn!(
            "hyperbolic_lp_norm: |mu| = {boundary_mass:.2e} at the box boundary; the integral may be truncated"
        );
    }
    Ok((acc.powf(1.0 / p), sup))
}

/// Local integral `int_{|z - x0| < r, Im z > 0} |mu(z)| / |z - x0|^2 dx dy`,
/// doubled when `reflect` accounts for the mirror image in the lower
/// half-plane.
pub fn twb_local_integral(mu: &BeltramiField, x0: f64, r: f64, reflect: bool) -> Result<f64> {
    let xe = mu.x_edges();
    let ye = mu.y_edges();
    let min_cell = (1..xe.len())
        .map(|i| xe[i] - xe[i - 1])
        .chain((1..ye.len()).map(|j| ye[j] - ye[j - 1]))
        .fold(f64::INFINITY, f64::min);
    if r < 4.0 * min_cell {
        return Err(Error::RadiusTooSmall(r, min_cell));
    }
    const SUB: usize = 4;
    let mut acc = 0.0;
    for j in 0..mu.ny() {
        for i in 0..mu.nx() {
            let v = mu.at(i, j).norm();
            if v == 0.0 {
                continue;
            }
            let (xl, xr) = (xe[i], xe[i + 1]);
            let (yl, yr) = (ye[j], ye[j + 1]);
            // cell entirely outside the disk: skip via nearest-corner bound
            let dx = (xl - x0).max(x0 - xr).max(0.0);
            if dx * dx + yl * yl >= r * r {
                continue;
            }
            let sdx = (xr - xl) / SUB as f64;
            let sdy = (yr - yl) / SUB as f64;
            for sj in 0..SUB {
                let yy = yl + (sj as f64 + 0.5) * sdy;
                for si in 0..SUB {
                    let xx = xl + (si as f64 + 0.5) * sdx;
                    let rho2 = (xx - x0) * (xx - x0) + yy * yy;
                    if rho2 < r * r {
                        acc += v / rho2 * sdx * sdy;
                    }
                }
            }
        }
    }
    Ok(if reflect { 2.0 * acc } else { acc })
}
