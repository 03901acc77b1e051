//! Training, simulation and evaluation around the router.

pub mod behavior;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod seed;
pub mod simulate;
pub mod sweep;

pub use behavior::{AgentBehavior, Outcome, ScriptedBehavior, ScriptedRuntime};
pub use dataset::{load_dataset, AnswerMode, Diagnostic, LoadedDataset, QueryRecord};
pub use error::HarnessError;
pub use eval::{evaluate_em, evaluate_regression, grade, normalize_answer, wilson_ci, Metric, DEFAULT_NUMERIC_TOL};
pub use pipeline::{run_training_pipeline, CandidateRule, PipelineConfig, PipelineOutput};
pub use seed::derive_seed;
pub use simulate::{simulate_recovery, RecoveryBreakdown, RecoveryRow};
pub use sweep::{alpha_sweep, AlphaPoint, AlphaSweepResult, Oracle};
