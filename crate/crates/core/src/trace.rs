//! Execution traces: the training datum for the recovery matrix.

use std::io::{BufRead, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{IoError, TraceError};
use crate::vocab::{AgentId, ExecStatus, TaskType};

/// A recovery transition observed by evaluating a candidate specialist on
/// the same query after an error state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentedTransition {
    pub from: AgentId,
    pub status: ExecStatus,
    pub to: AgentId,
    #[serde(with = "bit")]
    pub recovered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub query_id: String,
    pub task_type: TaskType,
    pub steps: Vec<(AgentId, ExecStatus)>,
    #[serde(with = "bit")]
    pub correct: bool,
    #[serde(default)]
    pub augmented: Vec<AugmentedTransition>,
}

impl ExecutionTrace {
    pub fn new(query_id: impl Into<String>, task_type: TaskType) -> Self {
        ExecutionTrace {
            query_id: query_id.into(),
            task_type,
            steps: Vec::new(),
            correct: false,
            augmented: Vec::new(),
        }
    }

    /// Builder used heavily in tests and fixtures.
    pub fn with_steps(mut self, steps: impl IntoIterator<Item = (AgentId, ExecStatus)>) -> Self {
        self.steps.extend(steps);
        self
    }

    pub fn with_correct(mut self, correct: bool) -> Self {
        self.correct = correct;
        self
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        match self.steps.first() {
            None => Err(TraceError::Empty(self.query_id.clone())),
            Some((AgentId::Head, _)) => Ok(()),
            Some((first, _)) => Err(TraceError::NotHeadFirst {
                query_id: self.query_id.clone(),
                first: first.to_string(),
            }),
        }
    }

    pub fn terminated_normally(&self) -> bool {
        matches!(self.steps.last(), Some((AgentId::Fusion, _)))
    }

    /// Consecutive `(agent, status) -> next agent` transitions.
    pub fn transitions(&self) -> impl Iterator<Item = (AgentId, ExecStatus, AgentId)> + '_ {
        self.steps
            .windows(2)
            .map(|w| (w[0].0, w[0].1, w[1].0))
    }

    /// First error status along the trace, if any.
    pub fn first_error(&self) -> Option<ExecStatus> {
        self.steps.iter().map(|s| s.1).find(|s| s.is_error())
    }
}

pub fn write_traces_jsonl<'a, W, I>(mut out: W, traces: I) -> Result<(), IoError>
where
    W: Write,
    I: IntoIterator<Item = &'a ExecutionTrace>,
{
    for t in traces {
        serde_json::to_writer(&mut out, t).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads one trace per line. Blank lines are skipped; any malformed line
/// aborts with its line number.
pub fn read_traces_jsonl<R: BufRead>(input: R) -> Result<Vec<ExecutionTrace>, IoError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let trace: ExecutionTrace = serde_json::from_str(&line).map_err(|e| IoError::Record {
            line: i + 1,
            message: e.to_string(),
        })?;
        trace.validate().map_err(|e| IoError::Record {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(trace);
    }
    Ok(out)
}

/// Serializes a flag as `0`/`1` and accepts either integers or booleans.
mod bit {
    use super::*;

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*v))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Bool(bool),
        Int(u64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Bool(b) => Ok(b),
            Raw::Int(0) => Ok(false),
            Raw::Int(1) => Ok(true),
            Raw::Int(n) => Err(serde::de::Error::custom(format!(
                "expected bit 0 or 1, got {n}"
            ))),
        }
    }
}
