//! Inference loop: HEAD, threshold-gated scatter over the blackboard, pivot
//! selection, FAIL retirement and terminal fusion.

mod config;
mod runtime;
mod run;
mod step;

pub use config::{ConfigError, InferenceConfig, DEFAULT_MAX_STEPS, DEFAULT_PRIORITY, DEFAULT_TAU};
pub use run::{run_inference, Round, RunRecord, Termination};
pub use runtime::{AgentRuntime, StarAgents};
pub use step::{candidate_set, merge_results, pivot, scatter, threshold};
