use std::collections::BTreeMap;

use serde_json::{json, Value};

use star_toolkit::graph::{
    analyze_topology, detect_cascade, mcq_structural_filter, pairwise_causality, McqOption, NodeId, NodeSeries,
    TopologySummary, DEFAULT_ONSET_THRESHOLD,
};

use super::Args;
use crate::error::ComputeError;
use crate::parse::mcq_option;

pub const DEFAULT_MAX_LAG: usize = 5;

pub fn run(op: &str, a: &Args) -> Result<Value, ComputeError> {
    if op == "pairwise_causality" {
        let x: Vec<f64> = a.get("x")?;
        let y: Vec<f64> = a.get("y")?;
        let (lag, r) = pairwise_causality(&x, &y, a.opt_usize("max_lag")?.unwrap_or(DEFAULT_MAX_LAG))?;
        return Ok(json!({"lag": lag, "correlation": r}));
    }
    let g = a.graph()?;
    let summary = analyze_topology(&g);
    match op {
        "analyze_topology" => {
            let mut out = serde_json::to_value(&summary).expect("summary serializes");
            if a.raw("mcq_options").is_some() {
                merge(&mut out, mcq(a, &summary)?);
            }
            if a.raw("series").is_some() {
                merge(&mut out, cascade(a, &g)?);
            }
            Ok(out)
        }
        "centrality" => {
            let mut deg: BTreeMap<NodeId, usize> = g.nodes().iter().map(|n| (*n, 0)).collect();
            for e in g.edges() {
                *deg.entry(e.from).or_default() += 1;
                *deg.entry(e.to).or_default() += 1;
            }
            Ok(json!({"centrality_node": summary.centrality_node, "degrees": deg}))
        }
        "feature_vector" => Ok(json!({
            "feature_vector": [
                summary.n_nodes as f64,
                summary.n_edges as f64,
                f64::from(u8::from(summary.cyclic)),
                summary.longest_path.len() as f64,
            ],
        })),
        "detect_cascade" => cascade(a, &g),
        "mcq_filter" => mcq(a, &summary),
        other => Err(ComputeError::invalid(format!("unknown topological operation `{other}`"))),
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn parse_options(a: &Args) -> Result<Vec<McqOption>, ComputeError> {
    let raw: Vec<Value> = a.get("mcq_options")?;
    raw.into_iter()
        .map(|v| match v {
            Value::String(s) => mcq_option(&s).ok_or_else(|| ComputeError::invalid(format!("unreadable option `{s}`"))),
            other => serde_json::from_value(other).map_err(|e| ComputeError::invalid(e.to_string())),
        })
        .collect()
}

fn mcq(a: &Args, summary: &TopologySummary) -> Result<Value, ComputeError> {
    let f = mcq_structural_filter(summary, &parse_options(a)?);
    let scores: serde_json::Map<String, Value> = f.scores.iter().map(|(l, s)| (l.clone(), json!(s))).collect();
    Ok(json!({
        "mcq_scores": scores,
        "matching_options": f.matching(),
        "tool_confidence": f.tool_confidence,
    }))
}

fn cascade(a: &Args, g: &star_toolkit::graph::DirectedGraph<f64>) -> Result<Value, ComputeError> {
    let raw: BTreeMap<String, Vec<f64>> = a.get("series")?;
    let mut series: NodeSeries<f64> = BTreeMap::new();
    for (k, v) in raw {
        let id: NodeId = k.trim().parse().map_err(|_| ComputeError::invalid(format!("series key `{k}` is not a node id")))?;
        series.insert(id, v);
    }
    let thr = a.opt_f64("threshold")?.unwrap_or(DEFAULT_ONSET_THRESHOLD);
    let rep = detect_cascade(&series, g, thr)?;
    Ok(json!({"cascade_onsets": rep.onsets, "cascade_consistency": rep.consistency}))
}
