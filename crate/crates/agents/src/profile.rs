//! HEAD: query classification into a task type or composite sub-types.

use serde_json::{json, Value};

use star_core::{AgentId, TaskType, Taxonomy};

use crate::extractor::Extractor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Single(TaskType),
    /// Agent-level sub-types, activated in parallel.
    Composite(Vec<AgentId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryProfile {
    pub kind: ProfileKind,
    pub constraints: Vec<String>,
    pub benchmark: Option<String>,
}

impl QueryProfile {
    pub fn single(t: TaskType) -> Self {
        QueryProfile { kind: ProfileKind::Single(t), constraints: Vec::new(), benchmark: None }
    }

    pub fn open() -> Self {
        Self::single(TaskType::open())
    }

    pub fn composite(sub_types: Vec<AgentId>) -> Self {
        QueryProfile { kind: ProfileKind::Composite(sub_types), constraints: Vec::new(), benchmark: None }
    }

    /// Routing type: the single type, or OPEN for composite profiles.
    pub fn task_type(&self) -> TaskType {
        match &self.kind {
            ProfileKind::Single(t) => t.clone(),
            ProfileKind::Composite(_) => TaskType::open(),
        }
    }

    pub fn sub_types(&self) -> &[AgentId] {
        match &self.kind {
            ProfileKind::Single(_) => &[],
            ProfileKind::Composite(v) => v,
        }
    }

    pub fn is_composite(&self) -> bool {
        matches!(self.kind, ProfileKind::Composite(_))
    }

    /// Blackboard form deposited by HEAD under `query_profile`.
    pub fn to_payload(&self) -> Value {
        let mut v = json!({
            "task_type": self.task_type().as_str(),
            "constraints": self.constraints,
            "benchmark": self.benchmark,
        });
        if let ProfileKind::Composite(subs) = &self.kind {
            v["sub_types"] = json!(subs.iter().map(|a| a.name()).collect::<Vec<_>>());
        }
        v
    }

    /// Reads an extractor record. Unknown task types collapse to OPEN; a
    /// non-empty `sub_types` list of specialists makes the profile composite.
    pub fn from_payload(v: &Value, taxonomy: &Taxonomy) -> Self {
        let strings = |key: &str| -> Vec<String> {
            v.get(key)
                .and_then(Value::as_array)
                .map(|a| a.iter().filter_map(|x| x.as_str().map(str::to_string)).collect())
                .unwrap_or_default()
        };
        let mut subs: Vec<AgentId> = Vec::new();
        for name in strings("sub_types") {
            if let Ok(a) = name.parse::<AgentId>() {
                if a.is_specialist() && !subs.contains(&a) {
                    subs.push(a);
                }
            }
        }
        let kind = if subs.is_empty() {
            let name = v.get("task_type").and_then(Value::as_str).unwrap_or("");
            ProfileKind::Single(taxonomy.resolve(name))
        } else {
            ProfileKind::Composite(subs)
        };
        QueryProfile {
            kind,
            constraints: strings("constraints"),
            benchmark: v.get("benchmark").and_then(Value::as_str).map(str::to_string),
        }
    }
}

/// Classifies `query`. Empty input, extractor errors and unknown types all
/// yield the OPEN profile.
pub fn head_classify(query: &str, extractor: &dyn Extractor, taxonomy: &Taxonomy) -> QueryProfile {
    if query.trim().is_empty() {
        return QueryProfile::open();
    }
    match extractor.classify(query) {
        Ok(v) => QueryProfile::from_payload(&v, taxonomy),
        Err(_) => QueryProfile::open(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_round_trip() {
        let tax = Taxonomy::benchmark_default();
        let p = QueryProfile::composite(vec![AgentId::Spatial, AgentId::Temporal]);
        assert_eq!(QueryProfile::from_payload(&p.to_payload(), &tax), p);
        let v = json!({"task_type": "STBENCH_ADMIN_REGION", "benchmark": "STBench"});
        let q = QueryProfile::from_payload(&v, &tax);
        assert_eq!(q.task_type().as_str(), "STBENCH_ADMIN_REGION");
        assert_eq!(q.benchmark.as_deref(), Some("STBench"));
        assert!(QueryProfile::from_payload(&json!({"task_type": "NOPE"}), &tax).task_type().is_open());
        // sub-types naming only non-specialists fall back to the single type
        let h = QueryProfile::from_payload(&json!({"sub_types": ["HEAD"], "task_type": "x"}), &tax);
        assert!(!h.is_composite());
    }
}
