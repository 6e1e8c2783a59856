use thiserror::Error;

use crate::solver::IterationTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular first-order system (determinant {0:e})")]
    Singular(f64),

    #[error("best-response iteration did not converge after {} iterations", .0.iterations)]
    NonConvergence(Box<IterationTrace>),

    #[error("{what}: residual {value:e} exceeds {threshold:e}")]
    Residual {
        what: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Returns `Err(Domain)` unless `value` is finite.
pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(format!("{name} must be finite, got {value}")))
    }
}
