use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("invalid {what}: {reason}")]
    Validation { what: &'static str, reason: String },

    /// The tridiagonal QL iteration hit its sweep cap.
    #[error("eigensolver did not converge for a {size}x{size} matrix (eigenvalue index {index})")]
    NonConvergence { size: usize, index: usize },

    /// A spectral function produced a non-finite value.
    #[error("function is not finite at eigenvalue {eigenvalue}")]
    NonFiniteFunction { eigenvalue: f64 },

    /// A radial function produced a non-finite value at a mesh point.
    #[error("{what} is not finite at r = {r}")]
    NonFiniteAtRadius { what: &'static str, r: f64 },

    /// The position-squared matrix has a non-positive eigenvalue, so no radial mesh exists.
    #[error("non-positive r^2 eigenvalue {value}; cannot form a radial mesh point")]
    NonPositiveMesh { value: f64 },

    /// Closed-form expression evaluated outside its domain.
    #[error("outside domain: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn validation(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
