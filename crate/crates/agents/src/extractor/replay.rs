//! Fixture playback for golden tests.

use std::collections::HashMap;
use std::io::BufRead;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use star_core::{AgentId, Blackboard};

use super::Extractor;
use crate::error::ExtractError;
use crate::menu::ComputationMenu;
use crate::selection::{parse_fenced, MenuSelection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Classify,
    Select,
    Answer,
}

/// One recorded model exchange.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub query: String,
    pub role: Role,
    #[serde(default)]
    pub agent: Option<AgentId>,
    /// Raw reply text; selection and classification replies carry a
    /// `<JSON>...</JSON>` fence.
    pub reply: String,
}

type Key = (Role, Option<AgentId>, String);

/// Answers from recorded replies keyed by (role, agent, trimmed query).
/// Counts calls per role so tests can assert that a path stayed offline.
#[derive(Debug, Default)]
pub struct ReplayExtractor {
    records: HashMap<Key, String>,
    calls: [AtomicUsize; 3],
}

fn role_index(r: Role) -> usize {
    match r {
        Role::Classify => 0,
        Role::Select => 1,
        Role::Answer => 2,
    }
}

impl ReplayExtractor {
    pub fn new(records: impl IntoIterator<Item = ReplayRecord>) -> Self {
        let mut out = ReplayExtractor::default();
        for r in records {
            out.records
                .entry((r.role, r.agent, r.query.trim().to_string()))
                .or_insert(r.reply);
        }
        out
    }

    /// Reads one JSON record per line; blank lines are skipped.
    pub fn from_jsonl<R: BufRead>(input: R) -> Result<Self, ExtractError> {
        let mut records = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| ExtractError::Transport(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let r: ReplayRecord = serde_json::from_str(&line)
                .map_err(|e| ExtractError::Malformed(format!("fixture line {}: {e}", i + 1)))?;
            records.push(r);
        }
        Ok(Self::new(records))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn calls(&self, role: Role) -> usize {
        self.calls[role_index(role)].load(Ordering::SeqCst)
    }

    fn lookup(&self, role: Role, agent: Option<AgentId>, query: &str) -> Result<&str, ExtractError> {
        self.calls[role_index(role)].fetch_add(1, Ordering::SeqCst);
        self.records
            .get(&(role, agent, query.trim().to_string()))
            .map(String::as_str)
            .ok_or_else(|| {
                let who = agent.map_or(String::new(), |a| format!(" by {a}"));
                ExtractError::NoFixture(format!("{role:?}{who}"))
            })
    }
}

impl Extractor for ReplayExtractor {
    fn classify(&self, query: &str) -> Result<Value, ExtractError> {
        parse_fenced(self.lookup(Role::Classify, None, query)?)
    }

    fn select(
        &self,
        agent: AgentId,
        query: &str,
        _bb: &Blackboard,
        _menu: &ComputationMenu,
    ) -> Result<Option<MenuSelection>, ExtractError> {
        MenuSelection::from_value(parse_fenced(self.lookup(Role::Select, Some(agent), query)?)?)
    }

    fn answer(&self, query: &str, _bb: &Blackboard) -> Result<String, ExtractError> {
        Ok(self.lookup(Role::Answer, None, query)?.to_string())
    }
}
