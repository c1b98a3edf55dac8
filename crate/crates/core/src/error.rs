use thiserror::Error;

pub type Result<T> = std::result::Result<T, NumericError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("no convergence after {evals} steps (estimate {estimate:e}, error {error:e})")]
    NotConverged {
        estimate: f64,
        error: f64,
        evals: usize,
    },
}

impl NumericError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        NumericError::Domain(msg.into())
    }
}
