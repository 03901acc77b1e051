use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown execution status `{0}`")]
    UnknownStatus(String),
    #[error("task type `{0}` is not registered and OPEN handling is disabled")]
    UnregisteredTaskType(String),
    #[error("task type `{0}` registered twice")]
    DuplicateTaskType(String),
    #[error("task type name `{0}` is reserved")]
    ReservedTaskType(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlackboardError {
    #[error("contract violation: entry step {got} but board length is {expected}")]
    StepMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace `{0}` has no steps")]
    Empty(String),
    #[error("trace `{query_id}` starts at {first} instead of HEAD")]
    NotHeadFirst { query_id: String, first: String },
}

#[derive(Debug, Error)]
pub enum RoutingError {
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error("nominal route for `{task_type}` is invalid: {reason}")]
    InvalidRoute { task_type: String, reason: String },
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("unknown ablation `{0}`")]
    UnknownAblation(String),
}

/// Failure to decode a matrix file. Carries the position reported by the
/// underlying parser when one is available.
#[derive(Debug, Error)]
pub enum MatrixParseError {
    #[error("matrix parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("matrix content error: {0}")]
    Content(String),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
}
