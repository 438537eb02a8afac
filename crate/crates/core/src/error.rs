use std::io;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{correction} correction is only implemented for d = 2 (got d = {d})")]
    UnsupportedDimension { correction: &'static str, d: usize },

    #[error("point {index} lies outside the window")]
    PointOutsideWindow { index: usize },

    #[error("points {first} and {second} coincide; the pattern is not simple")]
    DuplicatePoint { first: usize, second: usize },

    #[error("window too small for radius r = {r}")]
    WindowTooSmall { r: f64 },

    #[error("kernel bandwidth {delta} must be smaller than every grid radius (got r = {r})")]
    BandwidthTooLarge { r: f64, delta: f64 },

    #[error("inadmissible model: tau * kappa_d * r^d = {lambda} must be < 1")]
    Inadmissible { lambda: f64 },

    #[error("event budget of {budget} birth events exhausted")]
    EventBudgetExceeded { budget: u64 },

    #[error("covariance factorization failed after jitter {jitter:e}; eigenvalue range [{min_eigenvalue:e}, {max_eigenvalue:e}]")]
    Factorization {
        jitter: f64,
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
