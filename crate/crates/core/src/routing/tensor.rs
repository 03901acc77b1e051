//! Weighted transition counts indexed `[from, status, type, to]`.

use std::sync::Arc;

use crate::error::RoutingError;
use crate::routing::config::{trace_weight, StatusMode, TrainingConfig};
use crate::scalar::Real;
use crate::trace::ExecutionTrace;
use crate::vocab::{AgentId, ExecStatus, Taxonomy, TypeSlot};

/// Dense non-negative count tensor over the registered taxonomy plus the
/// OPEN slot.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTensor<S> {
    taxonomy: Arc<Taxonomy>,
    mode: StatusMode,
    data: Vec<S>,
}

impl<S: Real> CountTensor<S> {
    pub fn zeros(taxonomy: Arc<Taxonomy>, mode: StatusMode) -> Self {
        let len = AgentId::COUNT * mode.slots() * taxonomy.slot_count() * AgentId::COUNT;
        CountTensor {
            taxonomy,
            mode,
            data: vec![S::zero(); len],
        }
    }

    pub fn taxonomy(&self) -> &Arc<Taxonomy> {
        &self.taxonomy
    }

    pub fn status_mode(&self) -> StatusMode {
        self.mode
    }

    fn row_offset(&self, from: AgentId, status: ExecStatus, slot: TypeSlot) -> usize {
        let s = self.mode.slot(status);
        ((from.index() * self.mode.slots() + s) * self.taxonomy.slot_count() + slot.0)
            * AgentId::COUNT
    }

    pub fn row(&self, from: AgentId, status: ExecStatus, slot: TypeSlot) -> &[S] {
        let o = self.row_offset(from, status, slot);
        &self.data[o..o + AgentId::COUNT]
    }

    pub fn get(&self, from: AgentId, status: ExecStatus, slot: TypeSlot, to: AgentId) -> S {
        self.row(from, status, slot)[to.index()]
    }

    /// Adds a non-negative weight to one cell.
    pub fn add(&mut self, from: AgentId, status: ExecStatus, slot: TypeSlot, to: AgentId, w: S) {
        debug_assert!(w >= S::zero());
        let o = self.row_offset(from, status, slot);
        self.data[o + to.index()] += w;
    }

    pub fn row_sum(&self, from: AgentId, status: ExecStatus, slot: TypeSlot) -> S {
        crate::scalar::pairwise_sum(self.row(from, status, slot))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| *v >= S::zero())
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    /// Status values that address distinct rows under the current mode.
    pub fn status_rows(&self) -> &'static [ExecStatus] {
        match self.mode {
            StatusMode::Typed => &ExecStatus::ALL,
            StatusMode::Merged => &ExecStatus::ALL[..1],
        }
    }
}

/// Accumulates the weighted count tensor from execution traces.
///
/// Each observed transition contributes `w(r)` for its trace; when
/// augmentation is enabled every recovered augmented transition adds a
/// weight-1 count to its row. OPEN task types share the OPEN slot.
pub fn train_count_tensor<S: Real>(
    traces: &[ExecutionTrace],
    cfg: &TrainingConfig,
    taxonomy: Arc<Taxonomy>,
) -> Result<CountTensor<S>, RoutingError> {
    cfg.validate()?;
    let alpha = S::lit(cfg.effective_alpha());
    let mut tensor = CountTensor::zeros(taxonomy, cfg.status_mode());
    for trace in traces {
        let slot = tensor.taxonomy.slot(&trace.task_type)?;
        let w = trace_weight(trace.correct, alpha);
        if w > S::zero() {
            for (from, status, to) in trace.transitions() {
                tensor.add(from, status, slot, to, w);
            }
        }
        if cfg.enable_augmentation {
            for aug in trace.augmented.iter().filter(|a| a.recovered) {
                tensor.add(aug.from, aug.status, slot, aug.to, S::one());
            }
        }
    }
    Ok(tensor)
}
