//! Per-agent computation menus.

use serde_json::Value;

use star_core::AgentId;

/// Coarse JSON shape expected for a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Number,
    Integer,
    Bool,
    Text,
    List,
    Record,
    Any,
}

impl ParamKind {
    pub fn accepts(self, v: &Value) -> bool {
        match self {
            ParamKind::Number => v.is_number(),
            ParamKind::Integer => v.is_u64() || v.is_i64(),
            ParamKind::Bool => v.is_boolean(),
            ParamKind::Text => v.is_string(),
            ParamKind::List => v.is_array(),
            ParamKind::Record => v.is_object(),
            ParamKind::Any => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub required: bool,
}

const fn req(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, required: true }
}

const fn opt(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, required: false }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MenuEntry {
    pub name: &'static str,
    pub params: &'static [ParamSpec],
    /// Blackboard key the result is deposited under.
    pub result_key: &'static str,
}

/// Declarative list of deterministic functions an agent may invoke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationMenu {
    pub agent: AgentId,
    pub entries: Vec<MenuEntry>,
}

use ParamKind::*;

const RELATION: &[ParamSpec] = &[
    req("geom_1", List),
    req("geom_2", List),
    opt("geom_1_type", Text),
    opt("geom_2_type", Text),
    opt("frame", Text),
    opt("timestamps", List),
    opt("compute_event_interval", Bool),
];
const POINT_PAIR: &[ParamSpec] = &[req("geom_1", List), req("geom_2", List), opt("wedge_rule", Text)];
const LANDMARK: &[ParamSpec] = &[
    req("geom_1", Any),
    req("geom_2", Any),
    req("proposed_direction", Text),
    opt("wedge_rule", Text),
];
const ADMIN: &[ParamSpec] = &[req("coordinates", List), req("options", List)];
const EVENT_INTERVAL: &[ParamSpec] = &[
    req("geom_1", List),
    req("geom_2", List),
    req("timestamps", List),
    opt("relation", Text),
    opt("geom_2_type", Text),
    opt("frame", Text),
];
const LOCALIZE: &[ParamSpec] = &[req("observations", List), opt("frame", Text)];

const ALLEN: &[ParamSpec] = &[req("interval_a", List), req("interval_b", List)];
const FORECAST: &[ParamSpec] = &[req("series", List), req("horizon", Integer), opt("period", Integer)];
const SET_OP: &[ParamSpec] = &[req("op", Text), req("set_a", List), req("set_b", List)];

const TRAJ_ANOMALY: &[ParamSpec] = &[req("points", List), opt("timestamps", List), opt("factor", Number)];
const TRAJ_PREDICT: &[ParamSpec] = &[
    req("points", List),
    opt("timestamps", List),
    req("horizon", Integer),
    opt("k", Integer),
];
const TRAJ_REGION: &[ParamSpec] = &[req("points", List), opt("timestamps", List), req("region", List)];

const TOPOLOGY: &[ParamSpec] = &[
    opt("nodes", List),
    req("edges", List),
    opt("mcq_options", List),
    opt("series", Record),
];
const CASCADE: &[ParamSpec] = &[
    opt("nodes", List),
    req("edges", List),
    req("series", Record),
    opt("threshold", Number),
];
const CAUSALITY: &[ParamSpec] = &[req("x", List), req("y", List), opt("max_lag", Integer)];
const MCQ: &[ParamSpec] = &[opt("nodes", List), req("edges", List), req("mcq_options", List)];

const ROUTE: &[ParamSpec] = &[
    opt("nodes", List),
    req("edges", List),
    req("origin", Integer),
    req("destination", Integer),
];
const ETA: &[ParamSpec] = &[
    opt("nodes", List),
    req("edges", List),
    req("origin", Integer),
    req("destination", Integer),
    req("speed", Number),
];

/// Allen operation names, `allen_<relation>`.
pub const ALLEN_OPS: [&str; 13] = [
    "allen_before",
    "allen_after",
    "allen_meets",
    "allen_met_by",
    "allen_overlaps",
    "allen_overlapped_by",
    "allen_starts",
    "allen_started_by",
    "allen_during",
    "allen_contains",
    "allen_finishes",
    "allen_finished_by",
    "allen_equals",
];

impl ComputationMenu {
    /// The menu of `agent`. HEAD, SEMANTIC and FUSION have none.
    pub fn for_agent(agent: AgentId) -> Self {
        let key = agent.result_key();
        let e = |name: &'static str, params: &'static [ParamSpec]| MenuEntry { name, params, result_key: key };
        let entries = match agent {
            AgentId::Spatial => {
                let mut v: Vec<MenuEntry> = ["contains", "crosses", "intersects", "within", "touches", "overlaps", "equals"]
                    .into_iter()
                    .map(|n| e(n, RELATION))
                    .collect();
                v.push(e("compass_direction", POINT_PAIR));
                v.push(e("haversine_distance", POINT_PAIR));
                v.push(e("landmark_direction", LANDMARK));
                v.push(e("admin_region_lookup", ADMIN));
                v.push(e("compute_event_interval", EVENT_INTERVAL));
                v.push(e("localization", LOCALIZE));
                v
            }
            AgentId::Temporal => {
                let mut v: Vec<MenuEntry> = ALLEN_OPS.into_iter().map(|n| e(n, ALLEN)).collect();
                v.push(e("forecast", FORECAST));
                v.push(e("interval_set", SET_OP));
                v
            }
            AgentId::Trajectory => vec![
                e("anomaly", TRAJ_ANOMALY),
                e("predict", TRAJ_PREDICT),
                e("region_classify", TRAJ_REGION),
            ],
            AgentId::Topological => vec![
                e("analyze_topology", TOPOLOGY),
                e("centrality", TOPOLOGY),
                e("detect_cascade", CASCADE),
                e("pairwise_causality", CAUSALITY),
                e("feature_vector", TOPOLOGY),
                e("mcq_filter", MCQ),
            ],
            AgentId::Navigation => vec![e("shortest_path", ROUTE), e("eta", ETA)],
            AgentId::Head | AgentId::Semantic | AgentId::Fusion => Vec::new(),
        };
        ComputationMenu { agent, entries }
    }

    pub fn get(&self, name: &str) -> Option<&MenuEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
