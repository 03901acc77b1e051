use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpatialError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("coordinate out of range: {0}")]
    OutOfRange(String),
    #[error("geometries use different coordinate frames")]
    FrameMismatch,
    #[error("operation requires {0} coordinates")]
    WrongFrame(&'static str),
    #[error("bearing is undefined between identical points")]
    UndefinedBearing,
    #[error("unknown spatial relation {0:?}")]
    UnknownRelation(String),
    #[error("not enough constraints to localize: {0}")]
    InsufficientConstraints(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("option list is empty")]
    NoOptions,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemporalError {
    #[error("invalid interval [{start}, {end}]")]
    InvalidInterval { start: f64, end: f64 },
    #[error("unknown interval relation {0:?}")]
    UnknownRelation(String),
    #[error("series too short: need {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid period {0}")]
    InvalidPeriod(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("duplicate node {0}")]
    DuplicateNode(usize),
    #[error("invalid edge weight on {from}->{to}")]
    InvalidWeight { from: usize, to: usize },
    #[error("no path from {from} to {to}")]
    NoPath { from: usize, to: usize },
    #[error("path has no edge {from}->{to}")]
    BrokenPath { from: usize, to: usize },
    #[error("speed must be positive")]
    InvalidSpeed,
    #[error("series have zero variance")]
    ZeroVariance,
    #[error("series too short: need {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("series lengths differ")]
    LengthMismatch,
    #[error("no series for node {0}")]
    MissingSeries(usize),
}
