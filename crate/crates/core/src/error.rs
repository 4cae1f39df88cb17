use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("symbol is not finite at q = {q}, p = {p}")]
    NonFiniteSymbol { q: f64, p: f64 },

    #[error("quadrature order must be at least 2, got {0}")]
    QuadratureOrder(usize),

    #[error("tau must lie in [0, 1], got {0}")]
    TauRange(String),

    #[error("point not representable on the dual grid: {0}")]
    OffGrid(String),

    #[error("near-orthogonal pre/post states: |<phi|psi>| = {overlap:e} (relative {relative:e})")]
    NearOrthogonal { overlap: f64, relative: f64 },

    #[error("operator is not Hermitian: max |M - M^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
