//! Core vocabulary, blackboard, traces and the routing kernel.
//!
//! Numeric types are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation.

pub mod blackboard;
pub mod error;
pub mod routing;
pub mod scalar;
pub mod trace;
pub mod vocab;

pub use blackboard::{blackboard_append, Blackboard, BlackboardEntry, Payload};
pub use error::{BlackboardError, IoError, MatrixParseError, RoutingError, TraceError, VocabError};
pub use scalar::Real;
pub use trace::{read_traces_jsonl, write_traces_jsonl, AugmentedTransition, ExecutionTrace};
pub use vocab::{AgentId, ExecStatus, TaskType, Taxonomy, TypeSlot};

pub type Kernel = routing::RoutingKernel<f64>;
pub type Kernel32 = routing::RoutingKernel<f32>;
pub type Matrix = routing::RecoveryMatrix<f64>;
pub type Counts = routing::CountTensor<f64>;
pub type Dist = routing::Distribution<f64>;
