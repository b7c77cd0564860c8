use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("value {x} outside support 0..={n}")]
    OutsideSupport { x: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("CMP series did not settle within {terms} terms (partial log-sum {partial_log_sum})")]
    SeriesCap { terms: usize, partial_log_sum: f64 },

    #[error("power bias undefined: {0}")]
    PowerBiasUndefined(String),

    #[error("covariance matrix is singular or ill-conditioned (condition number {condition:e})")]
    SingularCovariance { condition: f64 },

    #[error("optimizer did not converge; best objective {best_objective} at {best_point:?}")]
    NonConvergence {
        best_point: Vec<f64>,
        best_objective: f64,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
