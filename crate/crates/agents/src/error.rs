use serde_json::Value;
use thiserror::Error;

use star_toolkit::{GraphError, SpatialError, TemporalError};

/// Failure reported by an extractor.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractError {
    /// The reply could not be decoded into a selection.
    #[error("malformed extractor reply: {0}")]
    Malformed(String),
    #[error("no fixture recorded for {0}")]
    NoFixture(String),
    #[error("extractor cannot handle this request: {0}")]
    Unsupported(String),
    #[error("transport error: {0}")]
    Transport(String),
}

/// Outcome of a tool call that did not produce a result.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComputeError {
    /// Bad parameters or a tool-side exception; maps to FAIL.
    #[error("{0}")]
    Invalid(String),
    /// The tool cannot be grounded for this query; maps to MISS.
    #[error("missing {key}")]
    Missing { key: String, detail: Value },
}

impl ComputeError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ComputeError::Invalid(msg.into())
    }

    pub fn missing(key: &str) -> Self {
        ComputeError::Missing { key: key.to_string(), detail: Value::Null }
    }
}

impl From<SpatialError> for ComputeError {
    fn from(e: SpatialError) -> Self {
        ComputeError::Invalid(e.to_string())
    }
}

impl From<TemporalError> for ComputeError {
    fn from(e: TemporalError) -> Self {
        ComputeError::Invalid(e.to_string())
    }
}

impl From<GraphError> for ComputeError {
    fn from(e: GraphError) -> Self {
        ComputeError::Invalid(e.to_string())
    }
}

impl From<TrajectoryError> for ComputeError {
    fn from(e: TrajectoryError) -> Self {
        ComputeError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeocodeError {
    #[error("geocoder fixture is empty")]
    Empty,
    #[error("no fixture entry within {tolerance_m} m of ({lat}, {lon})")]
    NoMatch { lat: f64, lon: f64, tolerance_m: f64 },
    #[error("fixture line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
}
