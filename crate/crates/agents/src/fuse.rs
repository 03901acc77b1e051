//! FUSION: deterministic answer templates first, extractor fallback second.

use serde_json::{json, Value};

use star_core::{AgentId, Blackboard};

use crate::extractor::Extractor;
use crate::parse;
use crate::profile::QueryProfile;

/// Minimum tool-side confidence for a template answer.
pub const TEMPLATE_CONFIDENCE: f64 = 0.5;

/// Answer convention requested by the query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnswerFormat {
    /// Bare option number.
    OptionNumber,
    /// `[RESULTS_START] [x] [RESULTS_END]`.
    Results,
    /// `<answer>X</answer>`.
    Tagged,
    /// `{"part1": .., "part2": ..}`.
    Parts,
    Plain,
}

impl AnswerFormat {
    pub fn detect(query: &str, profile: &QueryProfile) -> Self {
        if profile.is_composite() {
            AnswerFormat::Parts
        } else if query.contains("[RESULTS_START]") {
            AnswerFormat::Results
        } else if query.contains("Option (") || query.contains("number of your option") {
            AnswerFormat::OptionNumber
        } else if query.contains("<answer>") || !parse::mcq_options(query).is_empty() {
            AnswerFormat::Tagged
        } else {
            AnswerFormat::Plain
        }
    }

    fn render(self, v: &Fact) -> String {
        let body = match (self, v) {
            (AnswerFormat::Results, Fact::Bool(b)) => if *b { "1.0" } else { "0.0" }.to_string(),
            (_, Fact::Bool(b)) => u8::from(*b).to_string(),
            (_, Fact::Int(i)) => i.to_string(),
            (_, Fact::Num(x)) => x.to_string(),
            (_, Fact::Text(s)) => s.clone(),
        };
        self.wrap(&body)
    }

    pub fn wrap(self, body: &str) -> String {
        match self {
            AnswerFormat::Results => format!("[RESULTS_START] [{body}] [RESULTS_END]"),
            AnswerFormat::Tagged => format!("<answer>{body}</answer>"),
            AnswerFormat::OptionNumber | AnswerFormat::Parts | AnswerFormat::Plain => body.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Fact {
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
}

fn get<'a>(bb: &'a Blackboard, path: &str) -> Option<&'a Value> {
    bb.lookup(path).filter(|v| !v.is_null())
}

fn bool_at(bb: &Blackboard, path: &str) -> Option<bool> {
    get(bb, path)?.as_bool()
}

/// The template fact for a single-type profile, if the board supports one.
fn single_fact(bb: &Blackboard, profile: &QueryProfile) -> Option<Fact> {
    let conf = get(bb, "topological_data.tool_confidence").and_then(Value::as_f64).unwrap_or(0.0);
    if conf >= TEMPLATE_CONFIDENCE {
        if let Some(label) = get(bb, "topological_data.matching_options.0").and_then(Value::as_str) {
            return Some(Fact::Text(label.to_string()));
        }
    }
    if profile.task_type().as_str() == "STARK_SPATIOTEMPORAL_RELATIONSHIP" {
        // the combined relation needs both the event and the temporal relation
        return match bool_at(bb, "spatial_data.spatial_relation_holds") {
            Some(false) => Some(Fact::Bool(false)),
            Some(true) => bool_at(bb, "temporal_data.holds").map(Fact::Bool),
            None => None,
        };
    }
    if let Some(b) = bool_at(bb, "spatial_data.direction_holds") {
        return Some(Fact::Bool(b));
    }
    let score = get(bb, "spatial_data.match_score").and_then(Value::as_f64).unwrap_or(0.0);
    if score >= TEMPLATE_CONFIDENCE {
        if let Some(i) = get(bb, "spatial_data.matched_option").and_then(Value::as_i64) {
            return Some(Fact::Int(i));
        }
    }
    if let Some(i) = get(bb, "spatial_data.direction_result").and_then(Value::as_i64) {
        return Some(Fact::Int(i));
    }
    if let Some(b) = bool_at(bb, "temporal_data.holds") {
        return Some(Fact::Bool(b));
    }
    if let Some(b) = bool_at(bb, "trajectory_data.has_anomaly") {
        return Some(Fact::Bool(b));
    }
    if let Some(x) = get(bb, "navigation_data.eta").and_then(Value::as_f64) {
        return Some(Fact::Num(x));
    }
    if let Some(x) = get(bb, "navigation_data.cost").and_then(Value::as_f64) {
        return Some(Fact::Num(x));
    }
    get(bb, "semantic_data.answer").and_then(Value::as_str).map(|s| Fact::Text(s.to_string()))
}

/// Boolean outcome for one composite sub-type.
fn part_fact(bb: &Blackboard, agent: AgentId) -> Option<bool> {
    match agent {
        AgentId::Spatial => bool_at(bb, "spatial_data.spatial_relation_holds"),
        AgentId::Temporal => bool_at(bb, "temporal_data.holds"),
        AgentId::Trajectory => {
            bool_at(bb, "trajectory_data.within").or_else(|| bool_at(bb, "trajectory_data.has_anomaly"))
        }
        AgentId::Topological => get(bb, "topological_data.tool_confidence")
            .and_then(Value::as_f64)
            .map(|c| c >= TEMPLATE_CONFIDENCE),
        _ => None,
    }
}

/// Synthesizes the final answer. Always returns a non-empty string: when no
/// template applies and the extractor cannot answer, the format's
/// `unknown` placeholder is emitted.
pub fn fuse(bb: &Blackboard, query: &str, profile: &QueryProfile, extractor: &dyn Extractor) -> String {
    let format = AnswerFormat::detect(query, profile);
    if profile.is_composite() {
        let parts: Option<Vec<bool>> = profile.sub_types().iter().map(|a| part_fact(bb, *a)).collect();
        if let Some(parts) = parts {
            let mut rec = serde_json::Map::new();
            for (i, p) in parts.iter().enumerate() {
                rec.insert(format!("part{}", i + 1), json!(u8::from(*p)));
            }
            return Value::Object(rec).to_string();
        }
    } else if let Some(fact) = single_fact(bb, profile) {
        return format.render(&fact);
    }
    match extractor.answer(query, bb) {
        Ok(text) if !text.trim().is_empty() => text,
        _ => format.wrap("unknown"),
    }
}
