//! Append-only shared workspace.
//!
//! Every agent reads the same board and can only add entries to its end.
//! Keys are free strings; a later entry with the same key does not replace
//! the earlier one, readers simply take the latest entry per key.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{BlackboardError, IoError};
use crate::vocab::AgentId;

/// Self-describing structured value (null, bool, number, string, list, record).
pub type Payload = Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackboardEntry {
    pub producer: AgentId,
    pub key: String,
    pub payload: Payload,
    pub step: usize,
}

impl BlackboardEntry {
    pub fn new(producer: AgentId, key: impl Into<String>, payload: Payload, step: usize) -> Self {
        BlackboardEntry {
            producer,
            key: key.into(),
            payload,
            step,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Blackboard {
    entries: Vec<BlackboardEntry>,
}

impl Blackboard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BlackboardEntry] {
        &self.entries
    }

    /// Appends `entry`, whose step must equal the current board length.
    pub fn append(&mut self, entry: BlackboardEntry) -> Result<(), BlackboardError> {
        if entry.step != self.entries.len() {
            return Err(BlackboardError::StepMismatch {
                expected: self.entries.len(),
                got: entry.step,
            });
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Appends with the step number filled in from the board length.
    pub fn deposit(
        &mut self,
        producer: AgentId,
        key: impl Into<String>,
        payload: Payload,
    ) -> &BlackboardEntry {
        let step = self.entries.len();
        self.entries
            .push(BlackboardEntry::new(producer, key, payload, step));
        &self.entries[step]
    }

    /// Latest entry written under `key`.
    pub fn latest(&self, key: &str) -> Option<&BlackboardEntry> {
        self.entries.iter().rev().find(|e| e.key == key)
    }

    /// Resolves a dotted path such as `spatial_data.event_interval` against
    /// the latest entry for the first segment. Numeric segments index lists.
    pub fn lookup(&self, path: &str) -> Option<&Value> {
        let mut parts = path.split('.');
        let key = parts.next()?;
        let mut cur = &self.latest(key)?.payload;
        for part in parts {
            cur = match cur {
                Value::Object(map) => map.get(part)?,
                Value::Array(items) => items.get(part.parse::<usize>().ok()?)?,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Distinct keys present on the board.
    pub fn keys(&self) -> BTreeSet<&str> {
        self.entries.iter().map(|e| e.key.as_str()).collect()
    }

    pub fn by_producer(&self, producer: AgentId) -> impl Iterator<Item = &BlackboardEntry> {
        self.entries.iter().filter(move |e| e.producer == producer)
    }

    /// True when every entry of `self` appears, in order, at the start of `other`.
    pub fn is_prefix_of(&self, other: &Blackboard) -> bool {
        self.entries.len() <= other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a == b)
    }

    /// Writes one JSON record per entry.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), IoError> {
        for entry in &self.entries {
            serde_json::to_writer(&mut out, entry).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads a snapshot written by [`Blackboard::write_jsonl`]; the step
    /// contract is re-checked on every record.
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, IoError> {
        let mut board = Blackboard::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: BlackboardEntry =
                serde_json::from_str(&line).map_err(|e| IoError::Record {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            board.append(entry).map_err(|e| IoError::Record {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(board)
    }
}

/// Functional form of [`Blackboard::append`]: returns the extended board.
pub fn blackboard_append(
    bb: &Blackboard,
    entry: BlackboardEntry,
) -> Result<Blackboard, BlackboardError> {
    let mut next = bb.clone();
    next.append(entry)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn append_to_empty_board() {
        let entry = BlackboardEntry::new(AgentId::Spatial, "spatial_data", json!({"x": 1}), 0);
        let bb = blackboard_append(&Blackboard::new(), entry.clone()).unwrap();
        assert_eq!(bb.len(), 1);
        assert_eq!(bb.entries()[0], entry);
    }

    #[test]
    fn sequential_appends_are_prefixes() {
        let b0 = Blackboard::new();
        let b1 = blackboard_append(
            &b0,
            BlackboardEntry::new(AgentId::Head, "query_profile", json!({}), 0),
        )
        .unwrap();
        let b2 = blackboard_append(
            &b1,
            BlackboardEntry::new(AgentId::Spatial, "spatial_data", json!(1), 1),
        )
        .unwrap();
        assert!(b0.is_prefix_of(&b1));
        assert!(b1.is_prefix_of(&b2));
        assert!(!b2.is_prefix_of(&b1));
    }

    #[test]
    fn step_mismatch_is_rejected() {
        let mut bb = Blackboard::new();
        let err = bb
            .append(BlackboardEntry::new(AgentId::Head, "k", Value::Null, 3))
            .unwrap_err();
        assert_eq!(err, BlackboardError::StepMismatch { expected: 0, got: 3 });
        assert!(bb.is_empty());
    }

    #[test]
    fn spatial_then_temporal_exposes_both_keys() {
        let mut bb = Blackboard::new();
        bb.deposit(
            AgentId::Spatial,
            "spatial_data",
            json!({"spatial_relation_holds": true, "event_interval": [1.577, 10.761]}),
        );
        bb.deposit(
            AgentId::Temporal,
            "temporal_data",
            json!({"allen_relation": "during", "holds": false}),
        );
        let keys = bb.keys();
        assert!(keys.contains("spatial_data") && keys.contains("temporal_data"));
        assert_eq!(
            bb.lookup("spatial_data.event_interval.1"),
            Some(&json!(10.761))
        );
        assert_eq!(bb.lookup("temporal_data.holds"), Some(&json!(false)));
    }

    #[test]
    fn latest_entry_wins_without_overwriting() {
        let mut bb = Blackboard::new();
        bb.deposit(AgentId::Spatial, "spatial_data", json!({"v": 1}));
        bb.deposit(AgentId::Spatial, "spatial_data", json!({"v": 2}));
        assert_eq!(bb.len(), 2);
        assert_eq!(bb.lookup("spatial_data.v"), Some(&json!(2)));
        assert_eq!(bb.entries()[0].payload, json!({"v": 1}));
    }

    #[test]
    fn jsonl_round_trip() {
        let mut bb = Blackboard::new();
        bb.deposit(AgentId::Head, "query_profile", json!({"task_type": "X"}));
        bb.deposit(AgentId::Topological, "topological_data", json!([1, 2.5, null]));
        let mut buf = Vec::new();
        bb.write_jsonl(&mut buf).unwrap();
        let back = Blackboard::read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, bb);
    }
}
