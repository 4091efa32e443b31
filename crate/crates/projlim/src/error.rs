use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A covariance block failed its Cholesky factorization.
    #[error("covariance matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Total monomial degree exceeds the Wick pairing guard.
    #[error("total degree {degree} exceeds the pairing guard {max}")]
    DegreeGuard { degree: usize, max: usize },

    /// Discrete enumeration would exceed the outcome-count guard.
    #[error("outcome count {outcomes} exceeds the enumeration guard {max}")]
    OutcomeGuard { outcomes: u64, max: u64 },

    /// A net entry or function evaluation was NaN or infinite.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// A pullback target level below the function's own level.
    #[error("target level {target} is below the function level {level}")]
    LevelBelowFunction { target: usize, level: usize },

    /// Normalization constant indistinguishable from zero.
    #[error("ill-conditioned normalization: Z = {z} with stderr {stderr}")]
    IllConditioned { z: f64, stderr: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
