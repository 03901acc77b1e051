//! One query through HEAD, the routing rounds and FUSION.

use std::collections::BTreeSet;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use star_agents::QueryProfile;
use star_core::routing::{Ablation, Distribution, RoutingKernel};
use star_core::{AgentId, Blackboard, ExecStatus, ExecutionTrace, Real, TaskType};

use crate::config::InferenceConfig;
use crate::runtime::AgentRuntime;
use crate::step::{merge_results, pivot, scatter, threshold};

/// Why the loop handed over to FUSION.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// FUSION met the threshold.
    Routed,
    /// Nothing met the threshold (or everything was retired).
    SafetyNet,
    /// The step budget ran out.
    Budget,
}

/// One scatter round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Round {
    pub activated: Vec<AgentId>,
    pub results: Vec<(AgentId, ExecStatus)>,
    pub pivot: (AgentId, ExecStatus),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub answer: String,
    #[serde(skip)]
    pub profile: QueryProfile,
    pub trace: ExecutionTrace,
    #[serde(skip)]
    pub board: Blackboard,
    /// Board length after HEAD and after each round.
    pub snapshots: Vec<usize>,
    pub rounds: Vec<Round>,
    pub retired: BTreeSet<AgentId>,
    pub termination: Termination,
}

/// A routing thread. Standard queries have one lane starting at HEAD;
/// composite queries get one lane per sub-type whose candidate sets are
/// unioned each round.
#[derive(Clone, Debug)]
struct Lane {
    state: (AgentId, ExecStatus),
    seed: Option<AgentId>,
    open: bool,
}

fn successors<S: Real>(
    lane: &Lane,
    kernel: &RoutingKernel<S>,
    t: &TaskType,
    cfg: &InferenceConfig,
    retired: &BTreeSet<AgentId>,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<AgentId> {
    if let Some(a) = lane.seed {
        return BTreeSet::from([a]).difference(retired).copied().collect();
    }
    let (a, s) = lane.state;
    let Ok(dist) = kernel.route_distribution(a, s, t, cfg.ablation) else {
        return BTreeSet::new();
    };
    if cfg.ablation == Ablation::Random && a != AgentId::Fusion {
        return sample_one(&dist, retired, rng).into_iter().collect();
    }
    threshold(&dist, cfg.tau, retired)
}

/// Draws one successor in proportion to the non-retired mass.
fn sample_one<S: Real>(dist: &Distribution<S>, retired: &BTreeSet<AgentId>, rng: &mut ChaCha8Rng) -> Option<AgentId> {
    let live: Vec<(AgentId, f64)> = dist
        .support()
        .filter(|(a, _)| *a != AgentId::Head && !retired.contains(a))
        .map(|(a, p)| (a, p.as_f64()))
        .collect();
    let w = WeightedIndex::new(live.iter().map(|x| x.1)).ok()?;
    Some(live[w.sample(rng)].0)
}

/// Runs one query. Never fails: kernel errors and agent faults route to
/// FUSION, and the answer is never empty.
pub fn run_inference<S: Real>(
    query: &str,
    kernel: &RoutingKernel<S>,
    runtime: &dyn AgentRuntime,
    cfg: &InferenceConfig,
) -> RunRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let profile = runtime.classify(query);
    let t = profile.task_type();
    let mut bb = Blackboard::new();
    bb.deposit(AgentId::Head, AgentId::Head.result_key(), profile.to_payload());
    let mut trace = ExecutionTrace::new("", t.clone()).with_steps([(AgentId::Head, ExecStatus::Succ)]);
    let mut snapshots = vec![bb.len()];
    let mut rounds = Vec::new();
    let mut retired = BTreeSet::new();

    let mut lanes: Vec<Lane> = if profile.is_composite() {
        let subs = profile.sub_types();
        subs.iter()
            .map(|&a| Lane { state: (AgentId::Head, ExecStatus::Succ), seed: Some(a), open: true })
            .collect()
    } else {
        vec![Lane { state: (AgentId::Head, ExecStatus::Succ), seed: None, open: true }]
    };

    let rounds_allowed = cfg.max_steps.saturating_sub(2);
    let mut termination = Termination::Budget;
    for _ in 0..rounds_allowed {
        let mut per_lane = Vec::with_capacity(lanes.len());
        let mut next = BTreeSet::new();
        let mut any_empty = false;
        for lane in lanes.iter_mut().filter(|l| l.open) {
            let cands = successors(lane, kernel, &t, cfg, &retired, &mut rng);
            lane.seed = None;
            if cands.contains(&AgentId::Fusion) {
                termination = Termination::Routed;
                lane.open = false;
            } else if cands.is_empty() {
                any_empty = true;
                lane.open = false;
            } else {
                next.extend(cands.iter().copied());
            }
            per_lane.push(cands);
        }
        if next.is_empty() {
            if any_empty && termination != Termination::Routed {
                termination = Termination::SafetyNet;
            }
            break;
        }
        termination = Termination::Budget;

        let results = scatter(&next, &bb, query, runtime, cfg.parallelism);
        merge_results(&mut bb, &results);
        snapshots.push(bb.len());
        let statuses: Vec<(AgentId, ExecStatus)> = results.iter().map(|r| (r.agent, r.status)).collect();
        retired.extend(statuses.iter().filter(|(_, s)| *s == ExecStatus::Fail).map(|(a, _)| *a));

        let mut open_lanes = lanes.iter_mut().filter(|l| l.open);
        for cands in per_lane.iter().filter(|c| !c.is_empty() && !c.contains(&AgentId::Fusion)) {
            let lane = open_lanes.next().expect("one candidate set per open lane");
            let mine: Vec<_> = statuses.iter().copied().filter(|(a, _)| cands.contains(a)).collect();
            lane.state = pivot(&mine, cfg).expect("non-empty candidate set");
        }
        let overall = pivot(&statuses, cfg).expect("non-empty round");
        trace.steps.push(overall);
        rounds.push(Round { activated: next.into_iter().collect(), results: statuses, pivot: overall });
    }

    let mut answer = runtime.fuse(&bb, query, &profile);
    if answer.trim().is_empty() {
        answer = "unknown".into();
    }
    bb.deposit(AgentId::Fusion, AgentId::Fusion.result_key(), json!({"answer": answer}));
    snapshots.push(bb.len());
    trace.steps.push((AgentId::Fusion, ExecStatus::Succ));
    RunRecord { answer, profile, trace, board: bb, snapshots, rounds, retired, termination }
}
