use thiserror::Error;

/// Failures reported by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("bodies overlap or touch (separation {separation:e})")]
    Overlap { separation: f64 },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("problem too large for dense linear algebra: {0}")]
    TooLarge(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
