use thiserror::Error;

/// Errors raised by discretization, solvers and functionals.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("incompatible symmetry: {0}")]
    Symmetry(String),

    #[error("not normalized: weighted norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("negative entry at index {idx}: {value}")]
    Negative { idx: usize, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("potential not confining: {0}")]
    NonConfining(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("singular shifted solve at shift {shift}")]
    Singular { shift: f64 },

    #[error("all Gibbs weights underflow; truncation inconsistent with t")]
    Underflow,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
