//! Specialist agents built on the extract-compute-deposit protocol.
//!
//! An [`Extractor`] picks one entry of the agent's [`ComputationMenu`] and
//! fills its parameters; a deterministic tool computes the result and the
//! agent deposits it on the blackboard together with a typed status.

pub mod compute;
pub mod error;
pub mod execute;
pub mod extractor;
pub mod fuse;
pub mod geocode;
pub mod menu;
pub mod parse;
pub mod profile;
pub mod selection;
pub mod trajectory;

pub use error::{ComputeError, ExtractError, GeocodeError, TrajectoryError};
pub use execute::{execute_agent, AgentEnv, AgentResult};
pub use extractor::replay::ReplayExtractor;
pub use extractor::scripted::ScriptedExtractor;
pub use extractor::Extractor;
pub use fuse::{fuse, AnswerFormat};
pub use geocode::{geocode_lookup, Geocoder};
pub use menu::{ComputationMenu, MenuEntry, ParamKind, ParamSpec};
pub use profile::{head_classify, ProfileKind, QueryProfile};
pub use selection::MenuSelection;
pub use trajectory::{trajectory_ops, TrajectoryOp};
