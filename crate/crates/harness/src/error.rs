use thiserror::Error;

use star_core::{IoError, MatrixParseError, RoutingError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Matrix(#[from] MatrixParseError),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl HarnessError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        HarnessError::Invalid(msg.into())
    }

    /// Validation problems exit with status 2, everything else with 1.
    pub fn is_validation(&self) -> bool {
        !matches!(self, HarnessError::Read { .. } | HarnessError::Io(IoError::Io(_)))
    }
}
