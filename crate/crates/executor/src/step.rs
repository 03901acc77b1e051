//! The pieces of one routing round.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;

use star_agents::AgentResult;
use star_core::routing::Distribution;
use star_core::{AgentId, Blackboard, BlackboardEntry, ExecStatus, Real};

use crate::config::InferenceConfig;
use crate::runtime::AgentRuntime;

/// Agents with mass at least `tau`, minus the retired ones. HEAD is never
/// a successor. May be empty.
pub fn threshold<S: Real>(dist: &Distribution<S>, tau: f64, retired: &BTreeSet<AgentId>) -> BTreeSet<AgentId> {
    dist.support()
        .filter(|(a, p)| p.as_f64() >= tau && *a != AgentId::Head && !retired.contains(a))
        .map(|(a, _)| a)
        .collect()
}

/// [`threshold`] with the safety net: an empty set becomes `{FUSION}`.
pub fn candidate_set<S: Real>(dist: &Distribution<S>, tau: f64, retired: &BTreeSet<AgentId>) -> BTreeSet<AgentId> {
    let set = threshold(dist, tau, retired);
    if set.is_empty() {
        BTreeSet::from([AgentId::Fusion])
    } else {
        set
    }
}

/// Most urgent result by the configured status priority; ties go to the
/// agent declared first in the pool.
pub fn pivot(results: &[(AgentId, ExecStatus)], cfg: &InferenceConfig) -> Option<(AgentId, ExecStatus)> {
    results.iter().copied().min_by_key(|(a, s)| (cfg.rank(*s), a.index()))
}

fn guarded(runtime: &dyn AgentRuntime, a: AgentId, bb: &Blackboard, query: &str) -> AgentResult {
    catch_unwind(AssertUnwindSafe(|| runtime.execute(a, bb, query))).unwrap_or_else(|_| AgentResult {
        agent: a,
        status: ExecStatus::Fail,
        operation: None,
        deposits: vec![BlackboardEntry::new(
            a,
            a.result_key(),
            json!({"status": "FAIL", "error": "agent panicked"}),
            bb.len(),
        )],
    })
}

/// Runs every agent on the same snapshot, at most `parallelism` at a time.
/// Results come back in pool order whatever the completion order.
pub fn scatter(
    agents: &BTreeSet<AgentId>,
    bb: &Blackboard,
    query: &str,
    runtime: &dyn AgentRuntime,
    parallelism: usize,
) -> Vec<AgentResult> {
    let order: Vec<AgentId> = agents.iter().copied().collect();
    let mut out = Vec::with_capacity(order.len());
    for chunk in order.chunks(parallelism.max(1)) {
        if chunk.len() == 1 {
            out.push(guarded(runtime, chunk[0], bb, query));
            continue;
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&a| scope.spawn(move || guarded(runtime, a, bb, query)))
                .collect();
            for (h, &a) in handles.into_iter().zip(chunk) {
                out.push(h.join().unwrap_or_else(|_| guarded(runtime, a, bb, query)));
            }
        });
    }
    out
}

/// Appends every deposit in result order, re-stamping steps so the board
/// stays a dense append-only log.
pub fn merge_results(bb: &mut Blackboard, results: &[AgentResult]) {
    for r in results {
        for e in &r.deposits {
            bb.deposit(e.producer, e.key.clone(), e.payload.clone());
        }
    }
}
