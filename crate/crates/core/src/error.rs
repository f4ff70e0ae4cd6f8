use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// An integral or sum that does not converge; `condition` names the failed precondition.
    #[error("divergence: {condition}")]
    Divergence { condition: String },

    #[error("{what} did not converge (last value {last})")]
    NoConvergence { what: String, last: f64 },

    #[error("grid resolution: {0}")]
    GridResolution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn diverges(condition: impl Into<String>) -> Self {
        Error::Divergence {
            condition: condition.into(),
        }
    }

    /// True for failures caused by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_)
                | Error::Divergence { .. }
                | Error::NoConvergence { .. }
                | Error::GridResolution(_)
        )
    }
}
