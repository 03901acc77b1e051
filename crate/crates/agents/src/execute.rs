//! The extract-compute-deposit step for one specialist.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use star_core::{AgentId, Blackboard, BlackboardEntry, ExecStatus};
use star_toolkit::spatial::WedgeRule;

use crate::compute::{self, ComputeCtx};
use crate::error::{ComputeError, ExtractError};
use crate::extractor::Extractor;
use crate::geocode::Geocoder;
use crate::menu::ComputationMenu;
use crate::selection::{validate_params, MenuSelection};

/// Shared, read-only resources available to every agent.
#[derive(Clone)]
pub struct AgentEnv {
    pub extractor: Arc<dyn Extractor>,
    pub geocoder: Option<Geocoder>,
    pub wedge_rule: WedgeRule,
}

impl AgentEnv {
    pub fn new(extractor: Arc<dyn Extractor>) -> Self {
        AgentEnv { extractor, geocoder: None, wedge_rule: WedgeRule::default() }
    }

    pub fn with_geocoder(mut self, g: Geocoder) -> Self {
        self.geocoder = Some(g);
        self
    }

    pub fn with_wedge_rule(mut self, rule: WedgeRule) -> Self {
        self.wedge_rule = rule;
        self
    }
}

impl std::fmt::Debug for AgentEnv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AgentEnv")
            .field("geocoder", &self.geocoder.as_ref().map(|g| g.entries().len()))
            .field("wedge_rule", &self.wedge_rule)
            .finish_non_exhaustive()
    }
}

/// Status plus the entries the agent wants appended. Entry steps continue
/// from the snapshot length; the executor re-stamps them on merge.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentResult {
    pub agent: AgentId,
    pub status: ExecStatus,
    pub operation: Option<String>,
    pub deposits: Vec<BlackboardEntry>,
}

impl AgentResult {
    fn new(agent: AgentId, bb: &Blackboard, status: ExecStatus, operation: Option<&str>, payload: Value) -> Self {
        AgentResult {
            agent,
            status,
            operation: operation.map(str::to_string),
            deposits: vec![BlackboardEntry::new(agent, agent.result_key(), payload, bb.len())],
        }
    }

    /// Error result whose single deposit is a diagnostic record.
    fn diagnostic(agent: AgentId, bb: &Blackboard, status: ExecStatus, operation: Option<&str>, extra: Value) -> Self {
        let mut payload = json!({"status": status.name()});
        if let Some(op) = operation {
            payload["operation"] = json!(op);
        }
        if let Value::Object(m) = extra {
            payload.as_object_mut().expect("record").extend(m);
        }
        Self::new(agent, bb, status, operation, payload)
    }
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "tool panicked".into())
}

/// Runs agent `a` against the snapshot `bb`. Never panics and never
/// returns an error: every abnormal path becomes a typed status.
///
/// * extractor reply malformed, parameters invalid, tool error: FAIL
/// * a `$ref` parameter points at a key not yet on the board: BLOCK
/// * `resolved = false`, no applicable entry, tool cannot ground: MISS
pub fn execute_agent(a: AgentId, bb: &Blackboard, query: &str, env: &AgentEnv) -> AgentResult {
    use ExecStatus::*;
    if !a.is_specialist() {
        return AgentResult::diagnostic(a, bb, Fail, None, json!({"error": format!("{a} is not a specialist")}));
    }
    if a == AgentId::Semantic {
        return semantic(bb, query, env);
    }
    let menu = ComputationMenu::for_agent(a);
    let selected = catch_unwind(AssertUnwindSafe(|| env.extractor.select(a, query, bb, &menu)));
    let sel: MenuSelection = match selected {
        Ok(Ok(Some(sel))) => sel,
        Ok(Ok(None)) => return AgentResult::diagnostic(a, bb, Miss, None, json!({"missing": "menu_entry"})),
        Ok(Err(e @ (ExtractError::NoFixture(_) | ExtractError::Unsupported(_)))) => {
            return AgentResult::diagnostic(a, bb, Miss, None, json!({"missing": "menu_entry", "reason": e.to_string()}))
        }
        Ok(Err(e)) => return AgentResult::diagnostic(a, bb, Fail, None, json!({"error": e.to_string()})),
        Err(p) => return AgentResult::diagnostic(a, bb, Fail, None, json!({"error": panic_text(p)})),
    };
    let op = sel.operation.as_str();
    let Some(entry) = menu.get(op) else {
        return AgentResult::diagnostic(a, bb, Fail, Some(op), json!({"error": "operation is not on this agent's menu"}));
    };
    let params: Map<String, Value> = match sel.resolve_refs(bb) {
        Ok(p) => p,
        Err(path) => return AgentResult::diagnostic(a, bb, Block, Some(op), json!({"missing": path})),
    };
    if !sel.resolved && !compute::self_grounding(op) {
        return AgentResult::diagnostic(a, bb, Miss, Some(op), json!({"missing": "parameters"}));
    }
    if let Err(msg) = validate_params(entry, &params) {
        return AgentResult::diagnostic(a, bb, Fail, Some(op), json!({"error": msg}));
    }
    let ctx = ComputeCtx { bb, env, resolved: sel.resolved };
    match catch_unwind(AssertUnwindSafe(|| compute::run(a, op, &params, &ctx))) {
        Ok(Ok(out)) => {
            let mut payload = json!({"operation": op});
            if let Value::Object(m) = out {
                payload.as_object_mut().expect("record").extend(m);
            }
            let mut r = AgentResult::new(a, bb, Succ, Some(op), payload);
            r.deposits[0].key = entry.result_key.to_string();
            r
        }
        Ok(Err(ComputeError::Invalid(msg))) => AgentResult::diagnostic(a, bb, Fail, Some(op), json!({"error": msg})),
        Ok(Err(ComputeError::Missing { key, detail })) => {
            let mut extra = json!({"missing": key});
            if let Value::Object(m) = detail {
                extra.as_object_mut().expect("record").extend(m);
            }
            AgentResult::diagnostic(a, bb, Miss, Some(op), extra)
        }
        Err(p) => AgentResult::diagnostic(a, bb, Fail, Some(op), json!({"error": panic_text(p)})),
    }
}

/// SEMANTIC has no deterministic menu: it asks the extractor directly.
fn semantic(bb: &Blackboard, query: &str, env: &AgentEnv) -> AgentResult {
    let a = AgentId::Semantic;
    match catch_unwind(AssertUnwindSafe(|| env.extractor.answer(query, bb))) {
        Ok(Ok(text)) if !text.trim().is_empty() => {
            AgentResult::new(a, bb, ExecStatus::Succ, Some("answer"), json!({"operation": "answer", "answer": text}))
        }
        Ok(Ok(_)) | Ok(Err(_)) => {
            AgentResult::diagnostic(a, bb, ExecStatus::Miss, None, json!({"missing": "knowledge"}))
        }
        Err(p) => AgentResult::diagnostic(a, bb, ExecStatus::Fail, None, json!({"error": panic_text(p)})),
    }
}
