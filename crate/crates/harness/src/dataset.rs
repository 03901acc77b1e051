//! Line-delimited query records.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use star_core::TaskType;

use crate::error::HarnessError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerMode {
    #[default]
    Exact,
    #[serde(alias = "numeric-tolerance")]
    Numeric,
    Regression,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub id: String,
    #[serde(default)]
    pub benchmark: String,
    pub task_type: TaskType,
    pub query: String,
    pub gold: String,
    #[serde(default)]
    pub mode: AnswerMode,
}

impl QueryRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty id".into());
        }
        if self.mode != AnswerMode::Regression && self.gold.trim().is_empty() {
            return Err(format!("record `{}` has an empty gold answer", self.id));
        }
        Ok(())
    }
}

/// A skipped input line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadedDataset {
    pub records: Vec<QueryRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses one record per non-blank line. Bad lines become diagnostics
/// (1-based line numbers) and loading continues.
pub fn parse_dataset(text: &str) -> LoadedDataset {
    let mut out = LoadedDataset::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<QueryRecord>(line)
            .map_err(|e| e.to_string())
            .and_then(|r| r.validate().map(|_| r));
        match parsed {
            Ok(r) => out.records.push(r),
            Err(message) => out.diagnostics.push(Diagnostic { line: i + 1, message }),
        }
    }
    out
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LoadedDataset, HarnessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Read { path: path.display().to_string(), source })?;
    Ok(parse_dataset(&text))
}
