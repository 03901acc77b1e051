//! The dual-system routing kernel.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::RoutingError;
use crate::routing::config::{Ablation, StatusMode, TrainingConfig};
use crate::routing::distribution::Distribution;
use crate::routing::matrix::{normalize, RecoveryMatrix};
use crate::routing::nominal::NominalRouteTable;
use crate::routing::tensor::train_count_tensor;
use crate::scalar::Real;
use crate::trace::ExecutionTrace;
use crate::vocab::{AgentId, ExecStatus, TaskType, Taxonomy};

/// Provenance recorded alongside a trained matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMeta {
    pub alpha: f64,
    pub augmentation: bool,
    pub ablation: Ablation,
}

impl From<&TrainingConfig> for KernelMeta {
    fn from(cfg: &TrainingConfig) -> Self {
        KernelMeta {
            alpha: cfg.effective_alpha(),
            augmentation: cfg.enable_augmentation,
            ablation: cfg.ablation,
        }
    }
}

/// Expert nominal routes (System 1) plus the learned recovery matrix
/// (System 2). Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutingKernel<S> {
    nominal: NominalRouteTable,
    recovery: RecoveryMatrix<S>,
    meta: KernelMeta,
}

/// Specialists plus FUSION: the support of the RANDOM ablation.
pub const RANDOM_TARGETS: [AgentId; 7] = [
    AgentId::Spatial,
    AgentId::Temporal,
    AgentId::Trajectory,
    AgentId::Topological,
    AgentId::Navigation,
    AgentId::Semantic,
    AgentId::Fusion,
];

impl<S: Real> RoutingKernel<S> {
    pub fn new(nominal: NominalRouteTable, recovery: RecoveryMatrix<S>, meta: KernelMeta) -> Self {
        RoutingKernel {
            nominal,
            recovery,
            meta,
        }
    }

    /// Nominal routes with an empty recovery matrix: every error state falls
    /// to the safety net. Used to bootstrap trace collection.
    pub fn nominal_only(nominal: NominalRouteTable, taxonomy: Arc<Taxonomy>) -> Self {
        let cfg = TrainingConfig::default();
        RoutingKernel::new(
            nominal,
            RecoveryMatrix::empty(taxonomy, StatusMode::Typed),
            KernelMeta::from(&cfg),
        )
    }

    /// Counts, normalizes and wraps the traces into a kernel.
    pub fn train(
        traces: &[ExecutionTrace],
        cfg: &TrainingConfig,
        nominal: NominalRouteTable,
        taxonomy: Arc<Taxonomy>,
    ) -> Result<Self, RoutingError> {
        let counts = train_count_tensor::<S>(traces, cfg, taxonomy)?;
        Ok(RoutingKernel::new(nominal, normalize(&counts), cfg.into()))
    }

    pub fn nominal(&self) -> &NominalRouteTable {
        &self.nominal
    }

    pub fn recovery(&self) -> &RecoveryMatrix<S> {
        &self.recovery
    }

    pub fn taxonomy(&self) -> &Arc<Taxonomy> {
        self.recovery.taxonomy()
    }

    pub fn meta(&self) -> KernelMeta {
        self.meta
    }

    /// `(a, s, t)` is handled by System 1 iff `s` is nominal and the expert
    /// successor is defined at `a`.
    pub fn in_omega1(&self, a: AgentId, s: ExecStatus, t: &TaskType) -> bool {
        s.is_nominal() && self.nominal.successor(t, a).is_some()
    }

    /// Successor distribution for the control state `(a, s, t)` under the
    /// given ablation. Total: empty learned rows fall back to FUSION.
    pub fn route_distribution(
        &self,
        a: AgentId,
        s: ExecStatus,
        t: &TaskType,
        ablation: Ablation,
    ) -> Result<Distribution<S>, RoutingError> {
        let slot = self.taxonomy().slot(t)?;
        if a == AgentId::Fusion {
            return Ok(Distribution::delta(AgentId::Fusion));
        }
        let safety_net = Distribution::delta(AgentId::Fusion);
        let learned = |status: ExecStatus| {
            self.recovery
                .row(a, status, slot)
                .map(Distribution::from_row)
        };
        let dist = match ablation {
            Ablation::Random => Distribution::uniform(&RANDOM_TARGETS),
            Ablation::System1Only => match (s.is_nominal(), self.nominal.successor(t, a)) {
                (true, Some(next)) => Distribution::delta(next),
                _ => safety_net,
            },
            Ablation::System2Only => learned(s).unwrap_or(safety_net),
            Ablation::NoStatus => match self.recovery.status_mode() {
                StatusMode::Merged => learned(s).unwrap_or(safety_net),
                StatusMode::Typed => self.pooled_row(a, slot).unwrap_or(safety_net),
            },
            Ablation::Full | Ablation::AlphaZero => {
                if self.in_omega1(a, s, t) {
                    Distribution::delta(self.nominal.successor(t, a).expect("in omega1"))
                } else {
                    learned(s).unwrap_or(safety_net)
                }
            }
        };
        Ok(dist)
    }

    /// Equal-weight mixture of the non-empty status rows; lets a typed matrix
    /// answer status-blind queries.
    fn pooled_row(&self, a: AgentId, slot: crate::vocab::TypeSlot) -> Option<Distribution<S>> {
        let rows: Vec<&[S]> = ExecStatus::ALL
            .iter()
            .filter_map(|&s| self.recovery.row(a, s, slot))
            .collect();
        if rows.is_empty() {
            return None;
        }
        let n = S::from_usize_lossy(rows.len());
        let mut mixed = [S::zero(); AgentId::COUNT];
        for row in rows {
            for (m, v) in mixed.iter_mut().zip(row) {
                *m += *v / n;
            }
        }
        Some(Distribution::from_row(&mixed))
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

    fn nominal() -> NominalRouteTable {
        let mut n = NominalRouteTable::new();
        n.insert("T", vec![Head, Spatial, Temporal, Fusion]).unwrap();
        n
    }

    fn kernel(traces: &[ExecutionTrace], cfg: &TrainingConfig) -> RoutingKernel<f64> {
        RoutingKernel::train(traces, cfg, nominal(), tax()).unwrap()
    }

    fn corpus() -> Vec<ExecutionTrace> {
        vec![
            ExecutionTrace::new("1", "T".into())
                .with_steps([(Head, Succ), (Spatial, Miss), (Fusion, Succ)])
                .with_correct(true),
            ExecutionTrace::new("2", "T".into())
                .with_steps([(Head, Succ), (Spatial, Fail), (Navigation, Succ), (Fusion, Succ)])
                .with_correct(true),
        ]
    }

    #[test]
    fn system_one_delta_on_nominal_states() {
        let k = kernel(&corpus(), &TrainingConfig::default());
        let d = k.route_distribution(Spatial, Succ, &"T".into(), Ablation::Full).unwrap();
        assert_eq!(d, Distribution::delta(Temporal));
        assert!(k.in_omega1(Head, Init, &"T".into()));
        assert!(!k.in_omega1(Spatial, Miss, &"T".into()));
        assert!(!k.in_omega1(Fusion, Succ, &"T".into()));
    }

    #[test]
    fn system_two_rows_and_safety_net() {
        let k = kernel(&corpus(), &TrainingConfig::default());
        let t: TaskType = "T".into();
        let miss = k.route_distribution(Spatial, Miss, &t, Ablation::Full).unwrap();
        assert_eq!(miss, Distribution::delta(Fusion));
        let fail = k.route_distribution(Spatial, Fail, &t, Ablation::Full).unwrap();
        assert_eq!(fail, Distribution::delta(Navigation));
        let empty = k.route_distribution(Temporal, Fail, &t, Ablation::Full).unwrap();
        assert_eq!(empty, Distribution::delta(Fusion));
    }

    #[test]
    fn fusion_is_absorbing_under_every_ablation() {
        let k = kernel(&corpus(), &TrainingConfig::default());
        for ab in Ablation::ALL {
            for s in ExecStatus::ALL {
                let d = k.route_distribution(Fusion, s, &"T".into(), ab).unwrap();
                assert_eq!(d, Distribution::delta(Fusion));
            }
        }
    }

    #[test]
    fn ablation_behaviours() {
        let t: TaskType = "T".into();
        let k = kernel(&corpus(), &TrainingConfig::default());
        let s1 = k.route_distribution(Spatial, Fail, &t, Ablation::System1Only).unwrap();
        assert_eq!(s1, Distribution::delta(Fusion));
        let s1_nom = k.route_distribution(Head, Succ, &t, Ablation::System1Only).unwrap();
        assert_eq!(s1_nom, Distribution::delta(Spatial));
        // System 2 everywhere: HEAD,SUCC learned from traces
        let s2 = k.route_distribution(Head, Succ, &t, Ablation::System2Only).unwrap();
        assert_eq!(s2, Distribution::delta(Spatial));
        let s2_spatial = k.route_distribution(Spatial, Succ, &t, Ablation::System2Only).unwrap();
        assert_eq!(s2_spatial, Distribution::delta(Fusion));
        let r = k.route_distribution(Spatial, Fail, &t, Ablation::Random).unwrap();
        assert_eq!(r.support().count(), 7);
        assert!((r.total() - 1.0).abs() < 1e-12);

        let merged = kernel(
            &corpus(),
            &TrainingConfig::default().with_ablation(Ablation::NoStatus),
        );
        let f = merged.route_distribution(Spatial, Fail, &t, Ablation::NoStatus).unwrap();
        let m = merged.route_distribution(Spatial, Miss, &t, Ablation::NoStatus).unwrap();
        assert_eq!(f, m);
        assert!((f.get(Fusion) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strict_taxonomy_errors_on_unregistered_type() {
        let strict = Arc::new(Taxonomy::new(["T"]).unwrap().strict());
        let k: RoutingKernel<f64> = RoutingKernel::nominal_only(nominal(), strict);
        assert!(k
            .route_distribution(Spatial, Miss, &"Q".into(), Ablation::Full)
            .is_err());
        let open: RoutingKernel<f64> = RoutingKernel::nominal_only(nominal(), tax());
        let d = open
            .route_distribution(Head, Succ, &"Q".into(), Ablation::Full)
            .unwrap();
        assert_eq!(d, Distribution::delta(Fusion));
    }
}
