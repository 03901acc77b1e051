//! Row-normalized recovery matrix.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::routing::config::StatusMode;
use crate::routing::tensor::CountTensor;
use crate::scalar::Real;
use crate::vocab::{AgentId, ExecStatus, TaskType, Taxonomy, TypeSlot};

/// Row-stochastic version of a [`CountTensor`]. Zero-sum rows are marked
/// empty; rows leaving FUSION are always the delta on FUSION.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryMatrix<S> {
    taxonomy: Arc<Taxonomy>,
    mode: StatusMode,
    data: Vec<S>,
    filled: Vec<bool>,
}

impl<S: Real> RecoveryMatrix<S> {
    /// A matrix with only the structural FUSION rows.
    pub fn empty(taxonomy: Arc<Taxonomy>, mode: StatusMode) -> Self {
        normalize(&CountTensor::zeros(taxonomy, mode))
    }

    pub fn taxonomy(&self) -> &Arc<Taxonomy> {
        &self.taxonomy
    }

    pub fn status_mode(&self) -> StatusMode {
        self.mode
    }

    fn row_index(&self, from: AgentId, status: ExecStatus, slot: TypeSlot) -> usize {
        (from.index() * self.mode.slots() + self.mode.slot(status)) * self.taxonomy.slot_count()
            + slot.0
    }

    /// The normalized row, or `None` when no mass was observed.
    pub fn row(&self, from: AgentId, status: ExecStatus, slot: TypeSlot) -> Option<&[S]> {
        let r = self.row_index(from, status, slot);
        if self.filled[r] {
            let o = r * AgentId::COUNT;
            Some(&self.data[o..o + AgentId::COUNT])
        } else {
            None
        }
    }

    pub fn get(&self, from: AgentId, status: ExecStatus, slot: TypeSlot, to: AgentId) -> S {
        self.row(from, status, slot)
            .map(|r| r[to.index()])
            .unwrap_or_else(S::zero)
    }

    pub(crate) fn set_row(&mut self, from: AgentId, status: ExecStatus, slot: TypeSlot, row: &[S]) {
        let r = self.row_index(from, status, slot);
        let o = r * AgentId::COUNT;
        self.data[o..o + AgentId::COUNT].copy_from_slice(row);
        self.filled[r] = true;
    }

    /// Status values that address distinct rows under the current mode.
    pub fn status_rows(&self) -> &'static [ExecStatus] {
        match self.mode {
            StatusMode::Typed => &ExecStatus::ALL,
            StatusMode::Merged => &ExecStatus::ALL[..1],
        }
    }

    /// Iterates every non-empty row as `(from, status, slot, row)`.
    pub fn filled_rows(&self) -> impl Iterator<Item = (AgentId, ExecStatus, TypeSlot, &[S])> + '_ {
        let slots = self.taxonomy.slot_count();
        AgentId::ALL.into_iter().flat_map(move |a| {
            self.status_rows().iter().flat_map(move |&s| {
                (0..slots).filter_map(move |t| {
                    self.row(a, s, TypeSlot(t)).map(|r| (a, s, TypeSlot(t), r))
                })
            })
        })
    }
}

/// Divides each row by its sum; zero rows stay empty and FUSION rows are
/// overwritten with the absorbing delta.
pub fn normalize<S: Real>(counts: &CountTensor<S>) -> RecoveryMatrix<S> {
    let taxonomy = counts.taxonomy().clone();
    let mode = counts.status_mode();
    let n_rows = AgentId::COUNT * mode.slots() * taxonomy.slot_count();
    let mut m = RecoveryMatrix {
        taxonomy,
        mode,
        data: vec![S::zero(); n_rows * AgentId::COUNT],
        filled: vec![false; n_rows],
    };
    let slots = m.taxonomy.slot_count();
    let mut buf = [S::zero(); AgentId::COUNT];
    for a in AgentId::ALL {
        for &s in counts.status_rows() {
            for t in 0..slots {
                let slot = TypeSlot(t);
                if a == AgentId::Fusion {
                    buf = [S::zero(); AgentId::COUNT];
                    buf[AgentId::Fusion.index()] = S::one();
                    m.set_row(a, s, slot, &buf);
                    continue;
                }
                let row = counts.row(a, s, slot);
                let sum = counts.row_sum(a, s, slot);
                if sum > S::zero() {
                    for (dst, v) in buf.iter_mut().zip(row) {
                        *dst = *v / sum;
                    }
                    m.set_row(a, s, slot, &buf);
                }
            }
        }
    }
    m
}

/// Agents with positive probability in the row for `(a, s, t)`.
pub fn support<S: Real>(
    m: &RecoveryMatrix<S>,
    a: AgentId,
    s: ExecStatus,
    t: &TaskType,
) -> BTreeSet<AgentId> {
    let Ok(slot) = m.taxonomy().slot(t) else {
        return BTreeSet::new();
    };
    match m.row(a, s, slot) {
        Some(row) => AgentId::ALL
            .into_iter()
            .filter(|b| row[b.index()] > S::zero())
            .collect(),
        None => BTreeSet::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AgentId::*;
    use ExecStatus::*;

    fn tax() -> Arc<Taxonomy> {
        Arc::new(Taxonomy::new(["T"]).unwrap())
    }

    #[test]
    fn hand_normalization() {
        let mut c = CountTensor::<f64>::zeros(tax(), StatusMode::Typed);
        c.add(Spatial, Miss, TypeSlot(0), Temporal, 2.0);
        c.add(Spatial, Miss, TypeSlot(0), Navigation, 0.3);
        let m = normalize(&c);
        let row = m.row(Spatial, Miss, TypeSlot(0)).unwrap();
        assert!((row[Temporal.index()] - 2.0 / 2.3).abs() < 1e-12);
        assert!((row[Navigation.index()] - 0.3 / 2.3).abs() < 1e-12);
        assert!((row[Temporal.index()] - 0.8696).abs() < 1e-4);
        assert!((row[Navigation.index()] - 0.1304).abs() < 1e-4);
    }

    #[test]
    fn zero_rows_are_empty() {
        let m = RecoveryMatrix::<f64>::empty(tax(), StatusMode::Typed);
        assert!(m.row(Spatial, Fail, TypeSlot(0)).is_none());
        assert!(support(&m, Spatial, Fail, &"T".into()).is_empty());
    }

    #[test]
    fn fusion_rows_absorb() {
        let mut c = CountTensor::<f64>::zeros(tax(), StatusMode::Typed);
        c.add(Fusion, Succ, TypeSlot(0), Spatial, 5.0);
        let m = normalize(&c);
        for s in ExecStatus::ALL {
            for t in 0..tax().slot_count() {
                let row = m.row(Fusion, s, TypeSlot(t)).unwrap();
                assert_eq!(row[Fusion.index()], 1.0);
                assert_eq!(row.iter().sum::<f64>(), 1.0);
            }
        }
    }

    #[test]
    fn filled_rows_lists_nonempty() {
        let mut c = CountTensor::<f64>::zeros(tax(), StatusMode::Typed);
        c.add(Spatial, Miss, TypeSlot(0), Fusion, 1.0);
        let m = normalize(&c);
        let non_fusion: Vec<_> = m.filled_rows().filter(|r| r.0 != Fusion).collect();
        assert_eq!(non_fusion.len(), 1);
        assert_eq!((non_fusion[0].0, non_fusion[0].1), (Spatial, Miss));
    }
}
