//! Numerical function-space and singular-integral toolkit on the circle and
//! the real line: Besov/BMO/Sobolev seminorms, the Hilbert transform and
//! Riesz/Szego projections, composition operators, the Beurling-Ahlfors
//! extension with hyperbolic dilatation norms, conformal welding, and Cauchy
//! transforms on closed curves, cross-checked through the Plemelj and
//! direct-sum decomposition identities.
//!
//! Everything is built on a single discretization: a uniform half-offset grid
//! on the unit circle, transferred to the real line by the Cayley map
//! `K(x) = (x - i)/(x + i)`. Transforms act on the mean-zero quotient
//! (constants are annihilated), matching the seminorm setting where functions
//! are identified modulo constants.
//!
//! ```
//! use wpcurves::grid::{make_grid, GridFunction};
//! use wpcurves::transforms::hilbert_circle;
//! use num_complex::Complex64;
//!
//! let grid = make_grid(64).unwrap();
//! let f = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.cos(), 0.0));
//! let hf = hilbert_circle(&f).unwrap();
//! let expect = GridFunction::from_circle_fn(grid, |t| Complex64::new(t.sin(), 0.0));
//! assert!(hf.sub(&expect).sup_norm() < 1e-12);
//! ```

pub mod cauchy;
pub mod error;
pub mod grid;
pub mod interp;
pub mod io;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod quasiconformal;
pub mod spectral;
pub mod suites;
pub mod transforms;
pub mod welding;

pub use error::{Error, Result};
