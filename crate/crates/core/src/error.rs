use thiserror::Error;

/// Errors raised by tensor construction and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("index {index:?} out of range for dimension {dim} (indices are 1-based)")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("non-finite entry at flat position {0}")]
    NonFinite(usize),

    #[error("dense materialization needs {needed} entries but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("order {0} is odd; semi-definiteness is only defined for even order")]
    OddOrder(usize),

    #[error("the zero vector is not admissible here")]
    ZeroVector,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
