//! Agents, execution statuses and task types.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::VocabError;

/// One of the eight agents in the closed pool, in declaration order.
///
/// The declaration order doubles as the deterministic tie-break order used
/// by pivot selection, scatter merging and argmax inspection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentId {
    Head,
    Spatial,
    Temporal,
    Trajectory,
    Topological,
    Navigation,
    Semantic,
    Fusion,
}

impl AgentId {
    pub const COUNT: usize = 8;

    pub const ALL: [AgentId; 8] = [
        AgentId::Head,
        AgentId::Spatial,
        AgentId::Temporal,
        AgentId::Trajectory,
        AgentId::Topological,
        AgentId::Navigation,
        AgentId::Semantic,
        AgentId::Fusion,
    ];

    /// The specialist subset: the pool without HEAD and FUSION.
    pub const SPECIALISTS: [AgentId; 6] = [
        AgentId::Spatial,
        AgentId::Temporal,
        AgentId::Trajectory,
        AgentId::Topological,
        AgentId::Navigation,
        AgentId::Semantic,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<AgentId> {
        Self::ALL.get(i).copied()
    }

    pub fn is_specialist(self) -> bool {
        !matches!(self, AgentId::Head | AgentId::Fusion)
    }

    pub fn name(self) -> &'static str {
        match self {
            AgentId::Head => "HEAD",
            AgentId::Spatial => "SPATIAL",
            AgentId::Temporal => "TEMPORAL",
            AgentId::Trajectory => "TRAJECTORY",
            AgentId::Topological => "TOPOLOGICAL",
            AgentId::Navigation => "NAVIGATION",
            AgentId::Semantic => "SEMANTIC",
            AgentId::Fusion => "FUSION",
        }
    }

    /// Conventional blackboard key for this agent's results.
    pub fn result_key(self) -> &'static str {
        match self {
            AgentId::Head => "query_profile",
            AgentId::Spatial => "spatial_data",
            AgentId::Temporal => "temporal_data",
            AgentId::Trajectory => "trajectory_data",
            AgentId::Topological => "topological_data",
            AgentId::Navigation => "navigation_data",
            AgentId::Semantic => "semantic_data",
            AgentId::Fusion => "fusion_data",
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentId {
    type Err = VocabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let agent = match s.trim().to_ascii_uppercase().as_str() {
            "HEAD" => AgentId::Head,
            "SPATIAL" | "SP" => AgentId::Spatial,
            "TEMPORAL" | "TP" => AgentId::Temporal,
            "TRAJECTORY" | "TRAJ" => AgentId::Trajectory,
            "TOPOLOGICAL" | "TOPO" => AgentId::Topological,
            "NAVIGATION" | "NAV" => AgentId::Navigation,
            "SEMANTIC" | "SEM" => AgentId::Semantic,
            "FUSION" | "FUSE" => AgentId::Fusion,
            _ => return Err(VocabError::UnknownAgent(s.to_string())),
        };
        Ok(agent)
    }
}

impl Serialize for AgentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for AgentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Typed execution outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExecStatus {
    Init,
    Succ,
    /// Malformed result.
    Fail,
    /// Missing upstream dependency.
    Block,
    /// Tool/query mismatch.
    Miss,
}

impl ExecStatus {
    pub const COUNT: usize = 5;
    pub const ALL: [ExecStatus; 5] = [
        ExecStatus::Init,
        ExecStatus::Succ,
        ExecStatus::Fail,
        ExecStatus::Block,
        ExecStatus::Miss,
    ];
    pub const ERRORS: [ExecStatus; 3] = [ExecStatus::Fail, ExecStatus::Block, ExecStatus::Miss];
    pub const NOMINAL: [ExecStatus; 2] = [ExecStatus::Init, ExecStatus::Succ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<ExecStatus> {
        Self::ALL.get(i).copied()
    }

    pub fn is_error(self) -> bool {
        matches!(self, ExecStatus::Fail | ExecStatus::Block | ExecStatus::Miss)
    }

    pub fn is_nominal(self) -> bool {
        !self.is_error()
    }

    pub fn name(self) -> &'static str {
        match self {
            ExecStatus::Init => "INIT",
            ExecStatus::Succ => "SUCC",
            ExecStatus::Fail => "FAIL",
            ExecStatus::Block => "BLOCK",
            ExecStatus::Miss => "MISS",
        }
    }
}

/// True iff `s` is one of FAIL, BLOCK or MISS.
pub fn status_is_error(s: ExecStatus) -> bool {
    s.is_error()
}

impl fmt::Display for ExecStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExecStatus {
    type Err = VocabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let status = match s.trim().to_ascii_uppercase().as_str() {
            "INIT" => ExecStatus::Init,
            "SUCC" | "SUCCESS" => ExecStatus::Succ,
            "FAIL" | "FAILED" => ExecStatus::Fail,
            "BLOCK" | "BLOCKED" => ExecStatus::Block,
            "MISS" | "INFO_MISSING" => ExecStatus::Miss,
            _ => return Err(VocabError::UnknownStatus(s.to_string())),
        };
        Ok(status)
    }
}

impl Serialize for ExecStatus {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ExecStatus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A task type name. Whether it is registered is a question for a [`Taxonomy`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskType(String);

impl TaskType {
    /// Name used for every unregistered type.
    pub const OPEN_NAME: &'static str = "OPEN";

    pub fn new(name: impl Into<String>) -> Self {
        TaskType(name.into())
    }

    pub fn open() -> Self {
        TaskType(Self::OPEN_NAME.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_open(&self) -> bool {
        self.0 == Self::OPEN_NAME
    }
}

impl fmt::Display for TaskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TaskType {
    fn from(s: &str) -> Self {
        TaskType::new(s)
    }
}

/// Index of a task type inside a dense tensor: either a registered type or
/// the shared OPEN slot (always the last one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeSlot(pub usize);

/// Registered finite task-type set, immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taxonomy {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
    allow_open: bool,
}

const STARK_TYPES: [&str; 18] = [
    "SPATIAL_IMPUTE",
    "TEMPORAL_IMPUTE",
    "SPATIOTEMPORAL_IMPUTE",
    "SPATIAL_LOCALIZATION",
    "TEMPORAL_LOCALIZATION",
    "SPATIAL_TRACKING",
    "TEMPORAL_TRACKING",
    "SPATIOTEMPORAL_FORECAST",
    "SPATIAL_RELATIONSHIP",
    "TEMPORAL_RELATIONSHIP",
    "SPATIOTEMPORAL_RELATIONSHIP",
    "LANDMARK_PROXIMITY",
    "LANDMARK_DIRECTION",
    "INTENT_PREDICTION",
    "POI_PREDICTION",
    "ROUTE_PLANNING",
    "ROUTE_SEGMENT_DURATION",
    "ETA_CALCULATION",
];

const STBENCH_TYPES: [&str; 13] = [
    "DIRECTION_DETERMINATION",
    "FLOW_PREDICTION",
    "NAVIGATION",
    "ADMIN_REGION",
    "POINT_REGION",
    "POINT_TRAJECTORY",
    "TRAJECTORY_REGION",
    "TRAJECTORY_ANOMALY",
    "TRAJECTORY_PREDICTION",
    "TRAJECTORY_TRAJECTORY",
    "POI_CATEGORY_RECOGNITION",
    "URBAN_REGION_FUNCTION",
    "GENERAL",
];

const STBENCH_NEW_TYPES: [&str; 4] = ["CORRELATION", "ENTITY", "ETIOLOGICAL", "FORECASTING"];

impl Taxonomy {
    /// Builds a taxonomy from names; duplicates and the reserved OPEN name are rejected.
    pub fn new<I, S>(names: I) -> Result<Self, VocabError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Taxonomy {
            names: Vec::new(),
            lookup: HashMap::new(),
            allow_open: true,
        };
        for name in names {
            let name = name.into();
            if name == TaskType::OPEN_NAME {
                return Err(VocabError::ReservedTaskType(name));
            }
            if out.lookup.contains_key(&name) {
                return Err(VocabError::DuplicateTaskType(name));
            }
            out.lookup.insert(name.clone(), out.names.len());
            out.names.push(name);
        }
        Ok(out)
    }

    /// The 35-type taxonomy of the three spatiotemporal benchmarks, prefixed
    /// by benchmark (`STARK_`, `STBENCH_`, `ST_BENCH_NEW_`).
    pub fn benchmark_default() -> Self {
        let names = STARK_TYPES
            .iter()
            .map(|t| format!("STARK_{t}"))
            .chain(STBENCH_TYPES.iter().map(|t| format!("STBENCH_{t}")))
            .chain(STBENCH_NEW_TYPES.iter().map(|t| format!("ST_BENCH_NEW_{t}")));
        Self::new(names).expect("static taxonomy is valid")
    }

    /// Disables the OPEN fallback: unregistered types become lookup errors.
    pub fn strict(mut self) -> Self {
        self.allow_open = false;
        self
    }

    pub fn allows_open(&self) -> bool {
        self.allow_open
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of tensor slots: registered types plus the OPEN slot.
    pub fn slot_count(&self) -> usize {
        self.names.len() + 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, t: &TaskType) -> bool {
        self.lookup.contains_key(t.as_str())
    }

    pub fn open_slot(&self) -> TypeSlot {
        TypeSlot(self.names.len())
    }

    /// Resolves a task type to its tensor slot.
    pub fn slot(&self, t: &TaskType) -> Result<TypeSlot, VocabError> {
        match self.lookup.get(t.as_str()) {
            Some(&i) => Ok(TypeSlot(i)),
            None if self.allow_open => Ok(self.open_slot()),
            None => Err(VocabError::UnregisteredTaskType(t.to_string())),
        }
    }

    /// Name of the type stored at `slot`; the OPEN slot reports `OPEN`.
    pub fn slot_name(&self, slot: TypeSlot) -> &str {
        self.names
            .get(slot.0)
            .map(String::as_str)
            .unwrap_or(TaskType::OPEN_NAME)
    }

    /// Maps a raw name to a task type, collapsing unknown names to OPEN.
    pub fn resolve(&self, name: &str) -> TaskType {
        let name = name.trim();
        if self.lookup.contains_key(name) {
            TaskType::new(name)
        } else {
            TaskType::open()
        }
    }
}

impl Default for Taxonomy {
    fn default() -> Self {
        Self::benchmark_default()
    }
}
