use thiserror::Error;

/// Errors raised across the model, solver and search layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: N must be at least 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("{what} = {value} outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("simplex solver stalled after {iterations} iterations")]
    SolverStall { iterations: usize },

    #[error("simplex solver lost accuracy (residual {residual:e})")]
    SolverNumerics { residual: f64 },

    #[error("objective returned non-finite value {value} at {point:?}")]
    SearchAbort { value: f64, point: Vec<f64> },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
