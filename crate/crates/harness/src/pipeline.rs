//! Trace collection, recovery augmentation and matrix training.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use star_core::routing::{normalize, train_count_tensor, CountTensor, RecoveryMatrix, RoutingKernel, TrainingConfig};
use star_core::{AgentId, AugmentedTransition, Blackboard, ExecStatus, ExecutionTrace, Real};
use star_executor::{merge_results, run_inference, AgentRuntime, InferenceConfig, RunRecord};

use crate::dataset::QueryRecord;
use crate::error::HarnessError;
use crate::eval::grade;
use crate::seed::derive_seed;

/// Which specialists are tried on the same query after an error state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateRule {
    /// Every specialist except the one that erred, in pool order.
    #[default]
    AllOthers,
    Listed(Vec<AgentId>),
}

impl CandidateRule {
    pub fn candidates(&self, erred: AgentId) -> Vec<AgentId> {
        let pool: &[AgentId] = match self {
            CandidateRule::AllOthers => &AgentId::SPECIALISTS,
            CandidateRule::Listed(list) => list,
        };
        pool.iter().copied().filter(|a| *a != erred && a.is_specialist()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub training: TrainingConfig,
    pub inference: InferenceConfig,
    pub candidates: CandidateRule,
    /// Per-query inference seeds derive from this and the query id.
    pub master_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            training: TrainingConfig::default(),
            inference: InferenceConfig::default(),
            candidates: CandidateRule::default(),
            master_seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput<S> {
    pub traces: Vec<ExecutionTrace>,
    pub counts: CountTensor<S>,
    pub matrix: RecoveryMatrix<S>,
    pub kernel: RoutingKernel<S>,
}

fn prefix(bb: &Blackboard, len: usize) -> Blackboard {
    let mut out = Blackboard::new();
    for e in &bb.entries()[..len] {
        out.append(e.clone()).expect("prefix of a valid board");
    }
    out
}

/// Tries each candidate on the board as it stood right after the error and
/// records whether the fused answer would have been correct.
fn augment(record: &QueryRecord, run: &RunRecord, runtime: &dyn AgentRuntime, rule: &CandidateRule) -> Vec<AugmentedTransition> {
    let mut out = Vec::new();
    for (i, round) in run.rounds.iter().enumerate() {
        let (from, status) = round.pivot;
        if !status.is_error() || out.iter().any(|a: &AugmentedTransition| a.from == from && a.status == status) {
            continue;
        }
        let board = prefix(&run.board, run.snapshots[i + 1]);
        for to in rule.candidates(from) {
            let r = runtime.execute(to, &board, &record.query);
            let recovered = r.status == ExecStatus::Succ && {
                let mut after = board.clone();
                merge_results(&mut after, std::slice::from_ref(&r));
                grade(record, &runtime.fuse(&after, &record.query, &run.profile))
            };
            out.push(AugmentedTransition { from, status, to, recovered });
        }
    }
    out
}

/// Runs every training query through `bootstrap`, grades the answer,
/// augments error states and trains a kernel on the collected traces.
pub fn run_training_pipeline<S: Real>(
    dataset: &[QueryRecord],
    runtime: &dyn AgentRuntime,
    bootstrap: &RoutingKernel<S>,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput<S>, HarnessError> {
    if dataset.is_empty() {
        return Err(HarnessError::invalid("training dataset is empty"));
    }
    cfg.training.validate()?;
    cfg.inference.validate().map_err(|e| HarnessError::invalid(e.to_string()))?;
    let taxonomy = Arc::clone(bootstrap.taxonomy());
    let mut traces = Vec::with_capacity(dataset.len());
    for record in dataset {
        let icfg = cfg.inference.clone().with_seed(derive_seed(cfg.master_seed, &record.id));
        let run = run_inference(&record.query, bootstrap, runtime, &icfg);
        let mut trace = run.trace.clone();
        trace.query_id = record.id.clone();
        trace.correct = grade(record, &run.answer);
        if cfg.training.enable_augmentation {
            trace.augmented = augment(record, &run, runtime, &cfg.candidates);
        }
        traces.push(trace);
    }
    let counts = train_count_tensor::<S>(&traces, &cfg.training, taxonomy)?;
    let matrix = normalize(&counts);
    let kernel = RoutingKernel::new(bootstrap.nominal().clone(), matrix.clone(), (&cfg.training).into());
    Ok(PipelineOutput { traces, counts, matrix, kernel })
}
