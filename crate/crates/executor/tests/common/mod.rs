#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use star_agents::{AgentResult, QueryProfile};
use star_core::routing::{normalize, CountTensor, KernelMeta, NominalRouteTable, RoutingKernel, StatusMode, TrainingConfig};
use star_core::{AgentId, Blackboard, BlackboardEntry, ExecStatus, TaskType, Taxonomy};
use star_executor::AgentRuntime;

pub const T: &str = "T";

pub fn taxonomy() -> Arc<Taxonomy> {
    Arc::new(Taxonomy::new([T]).unwrap())
}

pub fn nominal() -> NominalRouteTable {
    let mut n = NominalRouteTable::new();
    n.insert(T, vec![AgentId::Head, AgentId::Spatial, AgentId::Temporal, AgentId::Fusion]).unwrap();
    n
}

/// Kernel whose learned rows come straight from `counts`
/// (from, status, to, weight).
pub fn kernel_from_counts(counts: &[(AgentId, ExecStatus, AgentId, f64)]) -> RoutingKernel<f64> {
    kernel_for_type(&TaskType::new(T), counts)
}

pub fn kernel_for_type(t: &TaskType, counts: &[(AgentId, ExecStatus, AgentId, f64)]) -> RoutingKernel<f64> {
    let tax = taxonomy();
    let slot = tax.slot(t).unwrap();
    let mut c = CountTensor::<f64>::zeros(tax, StatusMode::Typed);
    for &(a, s, to, w) in counts {
        c.add(a, s, slot, to, w);
    }
    let meta = KernelMeta::from(&TrainingConfig::default());
    RoutingKernel::new(nominal(), normalize(&c), meta)
}

/// Each agent replays a fixed status sequence indexed by how many entries
/// it already has on the board, so behavior is a pure function of the board.
#[derive(Clone, Debug, Default)]
pub struct Script {
    pub statuses: HashMap<AgentId, Vec<ExecStatus>>,
    pub profile: Option<QueryProfile>,
}

impl Script {
    pub fn with(mut self, a: AgentId, seq: &[ExecStatus]) -> Self {
        self.statuses.insert(a, seq.to_vec());
        self
    }
}

impl AgentRuntime for Script {
    fn classify(&self, _query: &str) -> QueryProfile {
        self.profile.clone().unwrap_or_else(|| QueryProfile::single(TaskType::new(T)))
    }

    fn execute(&self, a: AgentId, bb: &Blackboard, _query: &str) -> AgentResult {
        let n = bb.by_producer(a).count();
        let status = self
            .statuses
            .get(&a)
            .and_then(|seq| seq.get(n.min(seq.len().saturating_sub(1))).copied())
            .unwrap_or(ExecStatus::Succ);
        AgentResult {
            agent: a,
            status,
            operation: None,
            deposits: vec![BlackboardEntry::new(a, a.result_key(), json!({"status": status.name(), "n": n}), bb.len())],
        }
    }

    fn fuse(&self, bb: &Blackboard, _query: &str, _profile: &QueryProfile) -> String {
        format!("entries={}", bb.len())
    }
}
