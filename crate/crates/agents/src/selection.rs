//! Extractor output: the chosen operation and its parameters.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use star_core::Blackboard;

use crate::error::ExtractError;
use crate::menu::MenuEntry;

/// Key marking a parameter that points at an upstream blackboard value.
pub const REF_KEY: &str = "$ref";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MenuSelection {
    pub operation: String,
    pub params: Map<String, Value>,
    /// The extractor's own report that every parameter was grounded.
    pub resolved: bool,
}

impl MenuSelection {
    pub fn new(operation: impl Into<String>, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        MenuSelection { operation: operation.into(), params, resolved: true }
    }

    pub fn unresolved(mut self) -> Self {
        self.resolved = false;
        self
    }

    /// Decodes a record such as `{"operation": "within", "geom_1": ..,
    /// "coordinates_resolved": true}`. `null` means no entry applies.
    pub fn from_value(v: Value) -> Result<Option<Self>, ExtractError> {
        let mut map = match v {
            Value::Null => return Ok(None),
            Value::Object(m) => m,
            other => return Err(ExtractError::Malformed(format!("expected a record, got {other}"))),
        };
        let operation = match map.remove("operation") {
            Some(Value::String(s)) => s,
            Some(Value::Null) => return Ok(None),
            Some(other) => return Err(ExtractError::Malformed(format!("operation must be a string, got {other}"))),
            None => return Err(ExtractError::Malformed("missing `operation`".into())),
        };
        let mut resolved = true;
        for flag in ["coordinates_resolved", "resolved"] {
            match map.remove(flag) {
                Some(Value::Bool(b)) => resolved &= b,
                Some(other) => return Err(ExtractError::Malformed(format!("{flag} must be a bool, got {other}"))),
                None => {}
            }
        }
        Ok(Some(MenuSelection { operation, params: map, resolved }))
    }

    /// Replaces every `{"$ref": "key.path"}` with the referenced board value.
    /// Returns the first unresolvable path on failure.
    pub fn resolve_refs(&self, bb: &Blackboard) -> Result<Map<String, Value>, String> {
        let mut out = Map::new();
        for (k, v) in &self.params {
            out.insert(k.clone(), resolve_value(v, bb)?);
        }
        Ok(out)
    }

    /// Board paths referenced by the parameters.
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in self.params.values() {
            collect_refs(v, &mut out);
        }
        out
    }
}

fn as_ref(v: &Value) -> Option<&str> {
    match v {
        Value::Object(m) if m.len() == 1 => m.get(REF_KEY)?.as_str(),
        _ => None,
    }
}

fn resolve_value(v: &Value, bb: &Blackboard) -> Result<Value, String> {
    if let Some(path) = as_ref(v) {
        return bb.lookup(path).cloned().ok_or_else(|| path.to_string());
    }
    Ok(match v {
        Value::Array(items) => Value::Array(items.iter().map(|i| resolve_value(i, bb)).collect::<Result<_, _>>()?),
        Value::Object(m) => {
            let mut out = Map::new();
            for (k, x) in m {
                out.insert(k.clone(), resolve_value(x, bb)?);
            }
            Value::Object(out)
        }
        other => other.clone(),
    })
}

fn collect_refs(v: &Value, out: &mut Vec<String>) {
    if let Some(p) = as_ref(v) {
        out.push(p.to_string());
        return;
    }
    match v {
        Value::Array(items) => items.iter().for_each(|i| collect_refs(i, out)),
        Value::Object(m) => m.values().for_each(|i| collect_refs(i, out)),
        _ => {}
    }
}

/// Checks presence and JSON shape of every declared parameter.
pub fn validate_params(entry: &MenuEntry, params: &Map<String, Value>) -> Result<(), String> {
    for spec in entry.params {
        match params.get(spec.name) {
            None | Some(Value::Null) if spec.required => {
                return Err(format!("missing required parameter `{}`", spec.name));
            }
            None | Some(Value::Null) => {}
            Some(v) if !spec.kind.accepts(v) => {
                return Err(format!("parameter `{}` should be {:?}, got {v}", spec.name, spec.kind));
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Pulls the structured record out of a model reply: the text between
/// `<JSON>` and `</JSON>` when present, otherwise the whole reply.
pub fn parse_fenced(reply: &str) -> Result<Value, ExtractError> {
    let body = match (reply.find("<JSON>"), reply.rfind("</JSON>")) {
        (Some(i), Some(j)) if i + 6 <= j => &reply[i + 6..j],
        (Some(_), _) => return Err(ExtractError::Malformed("unterminated <JSON> fence".into())),
        _ => reply,
    };
    serde_json::from_str(body.trim()).map_err(|e| ExtractError::Malformed(e.to_string()))
}
