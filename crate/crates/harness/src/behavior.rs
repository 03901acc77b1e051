//! Scripted agents with injected statuses, for desk-scale recovery studies.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use star_agents::{AgentResult, QueryProfile};
use star_core::routing::{NominalRouteTable, RoutingKernel};
use star_core::{AgentId, Blackboard, BlackboardEntry, ExecStatus, TaskType, Taxonomy};
use star_executor::AgentRuntime;

use crate::dataset::QueryRecord;
use crate::error::HarnessError;
use crate::seed::derive_seed;

const PROB_TOL: f64 = 1e-9;

/// One possible result of an agent call: the status it reports and, when
/// it succeeds, the chance its evidence is correct.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub status: ExecStatus,
    pub p: f64,
    #[serde(default)]
    pub accuracy: f64,
}

impl Outcome {
    pub fn new(status: ExecStatus, p: f64, accuracy: f64) -> Self {
        Outcome { status, p, accuracy }
    }
}

/// Outcome distribution of one agent, optionally specialized by the first
/// error status already on the board (what the agent is recovering from).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentBehavior {
    pub agent: AgentId,
    /// Restricts the rule to one task type; `None` applies to all.
    #[serde(default)]
    pub task_type: Option<TaskType>,
    pub outcomes: Vec<Outcome>,
    #[serde(default)]
    pub after: Vec<(ExecStatus, Vec<Outcome>)>,
}

impl AgentBehavior {
    pub fn new(agent: AgentId, outcomes: Vec<Outcome>) -> Self {
        AgentBehavior { agent, task_type: None, outcomes, after: Vec::new() }
    }

    pub fn for_type(mut self, t: impl Into<TaskType>) -> Self {
        self.task_type = Some(t.into());
        self
    }

    pub fn after(mut self, first_error: ExecStatus, outcomes: Vec<Outcome>) -> Self {
        self.after.push((first_error, outcomes));
        self
    }

    fn outcomes_given(&self, first_error: Option<ExecStatus>) -> &[Outcome] {
        first_error
            .and_then(|e| self.after.iter().find(|(s, _)| *s == e))
            .map_or(&self.outcomes, |(_, o)| o)
    }
}

/// A full set of agent rules. Agents without a rule always MISS.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScriptedBehavior {
    pub seed: u64,
    pub task_types: Vec<TaskType>,
    pub rules: Vec<AgentBehavior>,
    /// Chance FUSION guesses right with no successful evidence.
    #[serde(default)]
    pub fusion_accuracy: f64,
    /// Expert routes for the scripted task types.
    #[serde(default)]
    pub routes: Vec<(TaskType, Vec<AgentId>)>,
}

fn check_outcomes(agent: AgentId, outcomes: &[Outcome]) -> Result<(), HarnessError> {
    let bad = |m: String| Err(HarnessError::invalid(format!("{agent}: {m}")));
    if outcomes.is_empty() {
        return bad("empty outcome list".into());
    }
    for o in outcomes {
        if o.status == ExecStatus::Init {
            return bad("INIT is not a result status".into());
        }
        if !(0.0..=1.0).contains(&o.p) || !(0.0..=1.0).contains(&o.accuracy) {
            return bad(format!("probabilities must lie in [0, 1]: {o:?}"));
        }
    }
    let total: f64 = outcomes.iter().map(|o| o.p).sum();
    if (total - 1.0).abs() > PROB_TOL {
        return bad(format!("outcome probabilities sum to {total}"));
    }
    Ok(())
}

impl ScriptedBehavior {
    pub fn new(seed: u64, task_types: Vec<TaskType>, rules: Vec<AgentBehavior>, fusion_accuracy: f64) -> Result<Self, HarnessError> {
        let b = ScriptedBehavior { seed, task_types, rules, fusion_accuracy, routes: Vec::new() };
        b.validate()?;
        Ok(b)
    }

    pub fn with_route(mut self, t: impl Into<TaskType>, path: Vec<AgentId>) -> Result<Self, HarnessError> {
        self.routes.push((t.into(), path));
        self.nominal_table()?;
        Ok(self)
    }

    pub fn nominal_table(&self) -> Result<NominalRouteTable, HarnessError> {
        let mut table = NominalRouteTable::new();
        for (t, path) in &self.routes {
            table.insert(t.as_str(), path.clone())?;
        }
        Ok(table)
    }

    pub fn taxonomy(&self) -> Result<Arc<Taxonomy>, HarnessError> {
        let names: Vec<&str> = self.task_types.iter().filter(|t| !t.is_open()).map(TaskType::as_str).collect();
        Taxonomy::new(names).map(Arc::new).map_err(|e| HarnessError::invalid(e.to_string()))
    }

    /// Nominal routes with an empty recovery matrix over this behavior's types.
    pub fn bootstrap_kernel(&self) -> Result<RoutingKernel<f64>, HarnessError> {
        Ok(RoutingKernel::nominal_only(self.nominal_table()?, self.taxonomy()?))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.task_types.is_empty() {
            return Err(HarnessError::invalid("behavior set names no task types"));
        }
        if !(0.0..=1.0).contains(&self.fusion_accuracy) {
            return Err(HarnessError::invalid("fusion_accuracy must lie in [0, 1]"));
        }
        self.nominal_table()?;
        for r in &self.rules {
            if !r.agent.is_specialist() {
                return Err(HarnessError::invalid(format!("{} cannot be scripted", r.agent)));
            }
            check_outcomes(r.agent, &r.outcomes)?;
            for (_, o) in &r.after {
                check_outcomes(r.agent, o)?;
            }
        }
        Ok(())
    }

    fn rule(&self, a: AgentId, t: &TaskType) -> Option<&AgentBehavior> {
        self.rules
            .iter()
            .find(|r| r.agent == a && r.task_type.as_ref() == Some(t))
            .or_else(|| self.rules.iter().find(|r| r.agent == a && r.task_type.is_none()))
    }
}

/// Runtime whose agents follow a [`ScriptedBehavior`]. Every draw is seeded
/// from (behavior seed, query, agent, attempt), so calls are pure.
#[derive(Clone, Debug)]
pub struct ScriptedRuntime {
    behavior: Arc<ScriptedBehavior>,
    queries: HashMap<String, (TaskType, String)>,
}

/// Answer emitted when the fused evidence is wrong.
pub const WRONG_ANSWER: &str = "__incorrect__";

impl ScriptedRuntime {
    pub fn new(behavior: ScriptedBehavior, records: &[QueryRecord]) -> Self {
        let queries = records
            .iter()
            .map(|r| (r.query.clone(), (r.task_type.clone(), r.gold.clone())))
            .collect();
        ScriptedRuntime { behavior: Arc::new(behavior), queries }
    }

    pub fn behavior(&self) -> &ScriptedBehavior {
        &self.behavior
    }

    fn rng(&self, label: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(self.behavior.seed, label))
    }
}

fn first_error(bb: &Blackboard) -> Option<ExecStatus> {
    bb.entries().iter().find_map(|e| {
        let s: ExecStatus = e.payload.get("status")?.as_str()?.parse().ok()?;
        s.is_error().then_some(s)
    })
}

impl AgentRuntime for ScriptedRuntime {
    fn classify(&self, query: &str) -> QueryProfile {
        self.queries.get(query).map_or_else(QueryProfile::open, |(t, _)| QueryProfile::single(t.clone()))
    }

    fn execute(&self, a: AgentId, bb: &Blackboard, query: &str) -> AgentResult {
        let t = self.classify(query).task_type();
        let attempt = bb.by_producer(a).count();
        let mut rng = self.rng(&format!("{query}\u{1f}{a}\u{1f}{attempt}"));
        let (status, correct) = match self.behavior.rule(a, &t) {
            None => (ExecStatus::Miss, false),
            Some(rule) => {
                let outcomes = rule.outcomes_given(first_error(bb));
                let mut u: f64 = rng.gen();
                let mut pick = *outcomes.last().expect("validated non-empty");
                for o in outcomes {
                    if u < o.p {
                        pick = *o;
                        break;
                    }
                    u -= o.p;
                }
                (pick.status, rng.gen::<f64>() < pick.accuracy)
            }
        };
        let payload = if status == ExecStatus::Succ {
            json!({"status": status.name(), "correct": correct})
        } else {
            json!({"status": status.name()})
        };
        AgentResult {
            agent: a,
            status,
            operation: None,
            deposits: vec![BlackboardEntry::new(a, a.result_key(), payload, bb.len())],
        }
    }

    /// Uses the most recent successful evidence; with none, guesses.
    fn fuse(&self, bb: &Blackboard, query: &str, _profile: &QueryProfile) -> String {
        let Some((_, gold)) = self.queries.get(query) else {
            return "unknown".into();
        };
        let evidence = bb
            .entries()
            .iter()
            .rev()
            .find(|e| e.payload.get("status").and_then(|s| s.as_str()) == Some("SUCC"))
            .and_then(|e| e.payload.get("correct").and_then(|c| c.as_bool()));
        let correct = evidence.unwrap_or_else(|| self.rng(&format!("{query}\u{1f}FUSION")).gen::<f64>() < self.behavior.fusion_accuracy);
        if correct {
            gold.clone()
        } else {
            WRONG_ANSWER.into()
        }
    }
}
