use thiserror::Error;

/// Errors raised by grid construction, quadrature and operator pipelines.
#[derive(Error, Debug)]
pub enum Error {
    #[error("n must be a power of two and at least 16, got {0}")]
    InvalidGridSize(usize),
    #[error("domain mismatch: expected {expected}, got {got}")]
    DomainMismatch { expected: &'static str, got: &'static str },
    #[error("value length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at node {0}")]
    NonFinite(usize),
    #[error("node map is not strictly increasing at index {0}")]
    NonMonotone(usize),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("evaluation point too close to the boundary curve")]
    PointOnBoundary,
    #[error("derivative vanishes at node {0}; logarithm branch undefined")]
    VanishingDerivative(usize),
    #[error("log branch jump exceeds pi between nodes {0} and {1}; grid too coarse")]
    BranchJump(usize, usize),
    #[error("curve fails the starlike/contraction condition: {0}")]
    NotStarlike(String),
    #[error("Theodorsen iteration did not contract: {0}")]
    NonContraction(String),
    #[error("injectivity certificate not positive: {0}")]
    NotInjective(f64),
    #[error("univalence condition violated: sum k|c_k| = {0} >= 1")]
    NotUnivalent(f64),
    #[error("insufficient decay for the non-regularized Hilbert transform")]
    InsufficientDecay,
    #[error("degenerate Jacobian: |H_z| below threshold at node ({0}, {1})")]
    DegenerateJacobian(usize, usize),
    #[error("box exceeds the reliable range of the boundary map")]
    BoxOutOfRange,
    #[error("radius {0} too small for grid resolution {1}")]
    RadiusTooSmall(f64, f64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
