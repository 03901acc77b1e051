//! Recovery breakdown over synthetic queries with injected statuses.

use serde::Serialize;

use star_core::{ExecStatus, Real};
use star_core::routing::RoutingKernel;
use star_executor::{run_inference, InferenceConfig};

use crate::behavior::{ScriptedBehavior, ScriptedRuntime};
use crate::dataset::{AnswerMode, QueryRecord};
use crate::eval::grade;
use crate::seed::derive_seed;

/// Outcomes of the queries whose first error had a given status (`None`
/// for runs without any error).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryRow {
    pub first_error: Option<ExecStatus>,
    pub n: usize,
    pub correct: usize,
}

impl RecoveryRow {
    pub fn em(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.correct as f64 / self.n as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryBreakdown {
    /// Rows with `n > 0`: the no-failure row first, then FAIL, BLOCK, MISS.
    pub rows: Vec<RecoveryRow>,
    pub total: usize,
}

impl RecoveryBreakdown {
    pub fn row(&self, first_error: Option<ExecStatus>) -> Option<&RecoveryRow> {
        self.rows.iter().find(|r| r.first_error == first_error)
    }

    pub fn baseline_em(&self) -> Option<f64> {
        self.row(None).map(RecoveryRow::em)
    }
}

/// Synthetic query set: ids `sim-<seed>-<i>`, task types cycling through
/// the behavior's list, gold answer `ok`.
pub fn synthetic_queries(behavior: &ScriptedBehavior, n: usize, seed: u64) -> Vec<QueryRecord> {
    (0..n)
        .map(|i| {
            let id = format!("sim-{seed}-{i}");
            QueryRecord {
                query: id.clone(),
                id,
                benchmark: "synthetic".into(),
                task_type: behavior.task_types[i % behavior.task_types.len()].clone(),
                gold: "ok".into(),
                mode: AnswerMode::Exact,
            }
        })
        .collect()
}

/// Runs `n_queries` synthetic queries through `kernel` and partitions EM by
/// the first error status in each trace. Deterministic in `seed`.
pub fn simulate_recovery<S: Real>(
    behavior: &ScriptedBehavior,
    kernel: &RoutingKernel<S>,
    n_queries: usize,
    seed: u64,
    cfg: &InferenceConfig,
) -> RecoveryBreakdown {
    let queries = synthetic_queries(behavior, n_queries, seed);
    let runtime = ScriptedRuntime::new(behavior.clone().with_seed(derive_seed(behavior.seed, &seed.to_string())), &queries);
    let keys = [None, Some(ExecStatus::Fail), Some(ExecStatus::Block), Some(ExecStatus::Miss)];
    let mut rows: Vec<RecoveryRow> = keys.iter().map(|k| RecoveryRow { first_error: *k, n: 0, correct: 0 }).collect();
    for q in &queries {
        let icfg = cfg.clone().with_seed(derive_seed(seed, &q.id));
        let run = run_inference(&q.query, kernel, &runtime, &icfg);
        let row = rows.iter_mut().find(|r| r.first_error == run.trace.first_error()).expect("every status has a row");
        row.n += 1;
        row.correct += usize::from(grade(q, &run.answer));
    }
    rows.retain(|r| r.n > 0);
    RecoveryBreakdown { rows, total: n_queries }
}
