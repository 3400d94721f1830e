use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge: estimate {estimate:e}, error indicator {error:e}, tolerance {tol:e}")]
    QuadratureNotConverged { estimate: f64, error: f64, tol: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("basis too large for dense assembly: n_max = {n_max} (limit {limit})")]
    BasisTooLarge { n_max: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
