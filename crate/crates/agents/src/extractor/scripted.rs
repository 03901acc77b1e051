//! Deterministic pattern-based extractor for the machine-generated
//! benchmark query templates.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde_json::{json, Value};

use star_core::{AgentId, Blackboard, TaskType};

use super::Extractor;
use crate::error::ExtractError;
use crate::menu::ComputationMenu;
use crate::parse::{self, NUM};
use crate::selection::MenuSelection;

#[derive(Clone, Debug, Default)]
pub struct ScriptedExtractor;

fn re(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static pattern"))
}

fn interval_literals(text: &str) -> Vec<[f64; 2]> {
    static RE: OnceLock<Regex> = OnceLock::new();
    re(&RE, &format!(r"[\[(]\s*({NUM})\s*,\s*({NUM})\s*[\])]"))
        .captures_iter(text)
        .filter_map(|c| Some([c[1].parse().ok()?, c[2].parse().ok()?]))
        .collect()
}

fn benchmark_of(t: &str) -> &'static str {
    if t.starts_with("STARK_") {
        "STARK"
    } else if t.starts_with("ST_BENCH_NEW_") {
        "ST-Bench-new"
    } else {
        "STBench"
    }
}

const ALLEN_WORDS: [(&str, &str); 13] = [
    ("overlapped by", "overlapped_by"),
    ("started by", "started_by"),
    ("finished by", "finished_by"),
    ("met by", "met_by"),
    ("during", "during"),
    ("overlap", "overlaps"),
    ("before", "before"),
    ("after", "after"),
    ("meets", "meets"),
    ("starts", "starts"),
    ("finishes", "finishes"),
    ("contains", "contains"),
    ("equals", "equals"),
];

fn allen_word(text: &str) -> Option<&'static str> {
    let t = text.to_ascii_lowercase();
    ALLEN_WORDS.iter().find(|(w, _)| t.contains(w)).map(|(_, op)| *op)
}

/// Task type implied by the query template, if recognized.
fn template_type(q: &str) -> Option<&'static str> {
    let lower = q.to_ascii_lowercase();
    if lower.contains("has a longitude of") && lower.contains("is in the ()") {
        Some("STBENCH_DIRECTION_DETERMINATION")
    } else if lower.contains("area where the coordinate may be located") {
        Some("STBENCH_ADMIN_REGION")
    } else if lower.contains("event:") && lower.contains("temporal relationship") {
        Some("STARK_SPATIOTEMPORAL_RELATIONSHIP")
    } else if lower.contains("spatial relationship between") && lower.contains("north of") {
        Some("STARK_LANDMARK_DIRECTION")
    } else if lower.contains("graph structure") && lower.contains("etiological") {
        Some("ST_BENCH_NEW_ETIOLOGICAL")
    } else if lower.contains("shortest path") || lower.contains("fastest route") {
        Some("STBENCH_NAVIGATION")
    } else if lower.contains("trajectory") && lower.contains("anomal") {
        Some("STBENCH_TRAJECTORY_ANOMALY")
    } else if lower.contains("temporal relationship") {
        Some("STARK_TEMPORAL_RELATIONSHIP")
    } else {
        None
    }
}

/// Two or more questions mixing a spatial clause with an interval clause.
fn composite_sub_types(q: &str) -> Option<Vec<&'static str>> {
    if q.matches('?').count() < 2 {
        return None;
    }
    let lower = q.to_ascii_lowercase();
    let spatial = ["within", "intersect", "inside", "zone", "area"].iter().any(|w| lower.contains(w));
    let temporal = interval_literals(q).len() >= 2 && allen_word(&lower).is_some();
    let mut subs = Vec::new();
    if lower.contains("trajectory") && lower.contains("anomal") {
        subs.push("TRAJECTORY");
    }
    if spatial {
        subs.push("SPATIAL");
    }
    if temporal {
        subs.push("TEMPORAL");
    }
    (subs.len() >= 2).then_some(subs)
}

fn current_type(bb: &Blackboard) -> TaskType {
    bb.lookup("query_profile.task_type")
        .and_then(Value::as_str)
        .map(TaskType::new)
        .unwrap_or_else(TaskType::open)
}

fn select_spatial(q: &str, t: &str) -> Option<MenuSelection> {
    match t {
        "STBENCH_DIRECTION_DETERMINATION" => {
            static RE: OnceLock<Regex> = OnceLock::new();
            let c = re(
                &RE,
                &format!(
                    r"longitude of ({NUM}) and a latitude of ({NUM}),? while B has a longitude of ({NUM}) and a latitude of ({NUM})"
                ),
            )
            .captures(q)?;
            let n = |i: usize| c[i].parse::<f64>().ok();
            Some(MenuSelection::new(
                "compass_direction",
                json!({"geom_1": [n(1)?, n(2)?], "geom_2": [n(3)?, n(4)?]}),
            ))
        }
        "STBENCH_ADMIN_REGION" => {
            static LAT: OnceLock<Regex> = OnceLock::new();
            static LON: OnceLock<Regex> = OnceLock::new();
            static OPTS: OnceLock<Regex> = OnceLock::new();
            let lat: f64 = re(&LAT, &format!(r#""latitude"\s*:\s*({NUM})"#)).captures(q)?[1].parse().ok()?;
            let lon: f64 = re(&LON, &format!(r#""longitude"\s*:\s*({NUM})"#)).captures(q)?[1].parse().ok()?;
            let opts = re(&OPTS, r#""options"\s*:\s*"([^"]*)""#).captures(q)?;
            Some(MenuSelection::new(
                "admin_region_lookup",
                json!({"coordinates": [{"latitude": lat, "longitude": lon}], "options": parse::numbered_options(&opts[1])}),
            ))
        }
        "STARK_SPATIOTEMPORAL_RELATIONSHIP" => {
            static REL: OnceLock<Regex> = OnceLock::new();
            let c = re(&REL, r"spatial relationship\s+\**\s*(\w+)\s*\**\s+with\s+(\w+)").captures(q)?;
            let region_start = c.get(2)?.start();
            let (rel, kind) = (c[1].to_ascii_lowercase(), c[2].to_ascii_lowercase());
            let traj_start = q.find("trajectory:")?;
            let ts_start = q.find("Timestamp")?;
            let region_end = q[region_start..].find(']').map(|i| region_start + i)?;
            let region = parse::tuples(&q[region_start..=region_end]);
            let traj = parse::tuples(&q[traj_start..ts_start]);
            let ts_end = q[ts_start..].find(']').map(|i| ts_start + i)?;
            let ts = parse::numbers(&q[ts_start..=ts_end]);
            let kind = if kind.starts_with("polygon") { "polygon" } else if kind.starts_with("line") { "linestring" } else { "point" };
            Some(MenuSelection::new(
                rel,
                json!({
                    "geom_1": traj, "geom_1_type": "linestring",
                    "geom_2": region, "geom_2_type": kind,
                    "timestamps": ts, "compute_event_interval": true,
                }),
            ))
        }
        "STARK_LANDMARK_DIRECTION" => {
            static RE: OnceLock<Regex> = OnceLock::new();
            let c = re(&RE, r"spatial relationship between (.+?) and (.+?) is (.+?),\s*selecting").captures(q)?;
            Some(
                MenuSelection::new(
                    "landmark_direction",
                    json!({"geom_1": c[1].trim(), "geom_2": c[2].trim(), "proposed_direction": c[3].trim()}),
                )
                .unresolved(),
            )
        }
        _ => None,
    }
}

fn select_temporal(q: &str, t: &str, composite: bool) -> Option<MenuSelection> {
    if t == "STARK_SPATIOTEMPORAL_RELATIONSHIP" {
        static RE: OnceLock<Regex> = OnceLock::new();
        let c = re(
            &RE,
            &format!(r"temporal relationship\s+\**\s*([\w ]+?)\s*\**\s+with the reference interval\s*\(\s*({NUM})\s*,\s*({NUM})\s*\)"),
        )
        .captures(q)?;
        let op = allen_word(&c[1])?;
        let b = [c[2].parse::<f64>().ok()?, c[3].parse::<f64>().ok()?];
        return Some(MenuSelection::new(
            format!("allen_{op}"),
            json!({"interval_a": {"$ref": "spatial_data.event_interval"}, "interval_b": b}),
        ));
    }
    if composite || t == "STARK_TEMPORAL_RELATIONSHIP" {
        // the clause that carries two interval literals
        for clause in q.split('?') {
            let iv = interval_literals(clause);
            if iv.len() >= 2 {
                let op = allen_word(clause)?;
                return Some(MenuSelection::new(
                    format!("allen_{op}"),
                    json!({"interval_a": iv[0], "interval_b": iv[1]}),
                ));
            }
        }
    }
    None
}

fn series_by_node(q: &str) -> BTreeMap<String, Vec<f64>> {
    static RE: OnceLock<Regex> = OnceLock::new();
    re(&RE, r"Node (\d+) time series[^\[]*\[([^\]]*)\]")
        .captures_iter(q)
        .filter(|c| !c[2].contains("...") && !c[2].contains('…'))
        .map(|c| (c[1].to_string(), parse::numbers(&c[2])))
        .collect()
}

fn select_topological(q: &str) -> Option<MenuSelection> {
    let edges = parse::graph_edges(q);
    if edges.is_empty() {
        return None;
    }
    let edge_list: Vec<[usize; 2]> = edges.iter().map(|(u, v, _)| [*u, *v]).collect();
    let options: Vec<String> = q
        .lines()
        .filter(|l| parse::mcq_option(l).is_some() && l.trim_start().chars().nth(1) == Some('.'))
        .map(|l| l.trim().to_string())
        .collect();
    let series = series_by_node(q);
    let mut params = json!({"edges": edge_list, "mcq_options": options});
    if !series.is_empty() && series.values().all(|v| v.len() == series.values().next().map_or(0, Vec::len)) {
        params["series"] = json!(series);
    }
    Some(MenuSelection::new("analyze_topology", params))
}

fn select_navigation(q: &str) -> Option<MenuSelection> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let c = re(&RE, r"(?i)from Node (\d+) to Node (\d+)").captures(q)?;
    let edges: Vec<Value> = parse::graph_edges(q)
        .into_iter()
        .map(|(u, v, w)| json!([u, v, w.unwrap_or(1.0)]))
        .collect();
    if edges.is_empty() {
        return None;
    }
    let (o, d): (usize, usize) = (c[1].parse().ok()?, c[2].parse().ok()?);
    Some(MenuSelection::new("shortest_path", json!({"edges": edges, "origin": o, "destination": d})))
}

fn select_trajectory(q: &str) -> Option<MenuSelection> {
    let start = q.find("trajectory:")?;
    let end = q[start..].find(']').map(|i| start + i)?;
    let pts = parse::tuples(&q[start..=end]);
    let mut params = json!({"points": pts});
    if let Some(ts_start) = q.find("Timestamp") {
        let ts_end = q[ts_start..].find(']').map(|i| ts_start + i)?;
        params["timestamps"] = json!(parse::numbers(&q[ts_start..=ts_end]));
    }
    let lower = q.to_ascii_lowercase();
    if lower.contains("anomal") {
        Some(MenuSelection::new("anomaly", params))
    } else if lower.contains("predict") || lower.contains("next position") {
        params["horizon"] = json!(1);
        Some(MenuSelection::new("predict", params))
    } else {
        None
    }
}

impl Extractor for ScriptedExtractor {
    fn classify(&self, query: &str) -> Result<Value, ExtractError> {
        if let Some(subs) = composite_sub_types(query) {
            return Ok(json!({"sub_types": subs, "constraints": [], "benchmark": null}));
        }
        Ok(match template_type(query) {
            Some(t) => json!({"task_type": t, "constraints": [], "benchmark": benchmark_of(t)}),
            None => json!({"task_type": TaskType::OPEN_NAME, "constraints": [], "benchmark": null}),
        })
    }

    fn select(
        &self,
        agent: AgentId,
        query: &str,
        bb: &Blackboard,
        _menu: &ComputationMenu,
    ) -> Result<Option<MenuSelection>, ExtractError> {
        let t = current_type(bb);
        let composite = bb.lookup("query_profile.sub_types").is_some();
        Ok(match agent {
            AgentId::Spatial => select_spatial(query, t.as_str()),
            AgentId::Temporal => select_temporal(query, t.as_str(), composite),
            AgentId::Topological => select_topological(query),
            AgentId::Navigation => select_navigation(query),
            AgentId::Trajectory => select_trajectory(query),
            AgentId::Head | AgentId::Semantic | AgentId::Fusion => None,
        })
    }

    fn answer(&self, _query: &str, _bb: &Blackboard) -> Result<String, ExtractError> {
        Err(ExtractError::Unsupported("scripted extractor has no world knowledge".into()))
    }
}
