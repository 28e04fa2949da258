use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A density matrix failed a structural requirement (Hermiticity, unit trace).
    #[error("representation error: {property} violated by {magnitude:e}")]
    Representation {
        property: &'static str,
        magnitude: f64,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Parameters that do not describe a positive operator.
    #[error("not a valid state: most negative eigenvalue {min_eigenvalue:e}")]
    Validity { min_eigenvalue: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("no convergence: best residual {best_residual:e} after {restarts} restarts")]
    Convergence { best_residual: f64, restarts: usize },
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn inconsistency(msg: impl Into<String>) -> Self {
        Error::NumericalInconsistency(msg.into())
    }
}
