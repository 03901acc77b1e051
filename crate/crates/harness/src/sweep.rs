//! Precision and coverage of the learned matrix as alpha varies.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use star_core::routing::{normalize, support, train_count_tensor, RecoveryMatrix, TrainingConfig};
use star_core::{AgentId, ExecStatus, ExecutionTrace, TaskType, Taxonomy};

use crate::error::HarnessError;

/// Best successor per control state, supplied by whoever built the corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub best: Vec<(AgentId, ExecStatus, TaskType, AgentId)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaPoint {
    pub alpha: f64,
    /// Mean mass on the oracle successor over nominal-status oracle states.
    pub precision: f64,
    /// Share of observed error states whose row is non-empty.
    pub coverage: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AlphaSweepResult {
    pub points: Vec<AlphaPoint>,
}

impl AlphaSweepResult {
    pub fn coverage_non_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].coverage >= w[0].coverage)
    }

    pub fn precision_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].precision <= w[0].precision + 1e-12)
    }
}

/// Error states that occur in the corpus with some successor, observed or
/// augmented.
pub fn observed_error_states(traces: &[ExecutionTrace]) -> BTreeSet<(AgentId, ExecStatus, TaskType)> {
    let mut out = BTreeSet::new();
    for t in traces {
        for (a, s, _) in t.transitions() {
            if s.is_error() {
                out.insert((a, s, t.task_type.clone()));
            }
        }
        for aug in t.augmented.iter().filter(|x| x.status.is_error()) {
            out.insert((aug.from, aug.status, t.task_type.clone()));
        }
    }
    out
}

fn mass(m: &RecoveryMatrix<f64>, a: AgentId, s: ExecStatus, t: &TaskType, to: AgentId) -> f64 {
    m.taxonomy().slot(t).map_or(0.0, |slot| m.get(a, s, slot, to))
}

/// Retrains at every alpha on the grid and scores the matrix.
pub fn alpha_sweep(
    traces: &[ExecutionTrace],
    alpha_grid: &[f64],
    oracle: &Oracle,
    taxonomy: &Arc<Taxonomy>,
    augmentation: bool,
) -> Result<AlphaSweepResult, HarnessError> {
    let errors = observed_error_states(traces);
    let nominal: Vec<_> = oracle.best.iter().filter(|(_, s, _, _)| s.is_nominal()).collect();
    let mut points = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let cfg = TrainingConfig::new(alpha)?.with_augmentation(augmentation);
        let m = normalize(&train_count_tensor::<f64>(traces, &cfg, Arc::clone(taxonomy))?);
        let precision = if nominal.is_empty() {
            0.0
        } else {
            nominal.iter().map(|(a, s, t, to)| mass(&m, *a, *s, t, *to)).sum::<f64>() / nominal.len() as f64
        };
        let coverage = if errors.is_empty() {
            0.0
        } else {
            errors.iter().filter(|(a, s, t)| !support(&m, *a, *s, t).is_empty()).count() as f64 / errors.len() as f64
        };
        points.push(AlphaPoint { alpha, precision, coverage });
    }
    Ok(AlphaSweepResult { points })
}

/// The standard grid 0, 0.1, ..., 1.0.
pub fn default_grid() -> Vec<f64> {
    (0..=10).map(|i| f64::from(i) / 10.0).collect()
}

/// Oracle as a lookup table.
pub fn oracle_map(o: &Oracle) -> BTreeMap<(AgentId, ExecStatus, TaskType), AgentId> {
    o.best.iter().map(|(a, s, t, to)| ((*a, *s, t.clone()), *to)).collect()
}
