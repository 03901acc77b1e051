//! Expert successor functions: one acyclic HEAD -> ... -> FUSION path per task type.

use std::collections::BTreeMap;

use crate::error::RoutingError;
use crate::vocab::{AgentId, TaskType};

/// Longest admissible nominal path: HEAD, every specialist once, FUSION.
pub const MAX_PATH_LEN: usize = AgentId::SPECIALISTS.len() + 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NominalRouteTable {
    paths: BTreeMap<String, Vec<AgentId>>,
}

impl NominalRouteTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the path for `task_type`, replacing any earlier one.
    pub fn insert(
        &mut self,
        task_type: impl Into<String>,
        path: Vec<AgentId>,
    ) -> Result<(), RoutingError> {
        let task_type = task_type.into();
        validate_path(&task_type, &path)?;
        self.paths.insert(task_type, path);
        Ok(())
    }

    pub fn path(&self, t: &TaskType) -> Option<&[AgentId]> {
        self.paths.get(t.as_str()).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[AgentId])> {
        self.paths.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `sigma_t(a)`: the agent after `a` on the nominal path, if `a` is on it
    /// and is not FUSION.
    pub fn successor(&self, t: &TaskType, a: AgentId) -> Option<AgentId> {
        let path = self.path(t)?;
        let pos = path.iter().position(|x| *x == a)?;
        path.get(pos + 1).copied()
    }

    /// First specialist after HEAD on the nominal path.
    pub fn first_specialist(&self, t: &TaskType) -> Option<AgentId> {
        self.successor(t, AgentId::Head)
            .filter(|a| a.is_specialist())
    }

    /// Expert routes for the 35 benchmark task types.
    pub fn benchmark_default() -> Self {
        use AgentId::*;
        let table: &[(&str, &[AgentId])] = &[
            ("STARK_SPATIAL_IMPUTE", &[Spatial]),
            ("STARK_TEMPORAL_IMPUTE", &[Temporal]),
            ("STARK_SPATIOTEMPORAL_IMPUTE", &[Spatial, Temporal]),
            ("STARK_SPATIAL_LOCALIZATION", &[Spatial]),
            ("STARK_TEMPORAL_LOCALIZATION", &[Temporal]),
            ("STARK_SPATIAL_TRACKING", &[Trajectory, Spatial]),
            ("STARK_TEMPORAL_TRACKING", &[Temporal]),
            ("STARK_SPATIOTEMPORAL_FORECAST", &[Trajectory, Temporal]),
            ("STARK_SPATIAL_RELATIONSHIP", &[Spatial]),
            ("STARK_TEMPORAL_RELATIONSHIP", &[Temporal]),
            ("STARK_SPATIOTEMPORAL_RELATIONSHIP", &[Spatial, Temporal]),
            ("STARK_LANDMARK_PROXIMITY", &[Spatial]),
            ("STARK_LANDMARK_DIRECTION", &[Spatial]),
            ("STARK_INTENT_PREDICTION", &[Trajectory, Semantic]),
            ("STARK_POI_PREDICTION", &[Trajectory, Semantic]),
            ("STARK_ROUTE_PLANNING", &[Navigation]),
            ("STARK_ROUTE_SEGMENT_DURATION", &[Navigation]),
            ("STARK_ETA_CALCULATION", &[Navigation]),
            ("STBENCH_DIRECTION_DETERMINATION", &[Spatial]),
            ("STBENCH_FLOW_PREDICTION", &[Temporal]),
            ("STBENCH_NAVIGATION", &[Navigation]),
            ("STBENCH_ADMIN_REGION", &[Spatial]),
            ("STBENCH_POINT_REGION", &[Spatial]),
            ("STBENCH_POINT_TRAJECTORY", &[Spatial]),
            ("STBENCH_TRAJECTORY_REGION", &[Trajectory]),
            ("STBENCH_TRAJECTORY_ANOMALY", &[Trajectory]),
            ("STBENCH_TRAJECTORY_PREDICTION", &[Trajectory]),
            ("STBENCH_TRAJECTORY_TRAJECTORY", &[Trajectory, Spatial]),
            ("STBENCH_POI_CATEGORY_RECOGNITION", &[Semantic]),
            ("STBENCH_URBAN_REGION_FUNCTION", &[Semantic]),
            ("STBENCH_GENERAL", &[Semantic]),
            ("ST_BENCH_NEW_CORRELATION", &[Topological]),
            ("ST_BENCH_NEW_ENTITY", &[Topological, Semantic]),
            ("ST_BENCH_NEW_ETIOLOGICAL", &[Topological]),
            ("ST_BENCH_NEW_FORECASTING", &[Temporal]),
        ];
        let mut out = NominalRouteTable::new();
        for (t, middle) in table {
            let mut path = vec![Head];
            path.extend_from_slice(middle);
            path.push(Fusion);
            out.insert(*t, path).expect("static route is valid");
        }
        out
    }
}

fn validate_path(task_type: &str, path: &[AgentId]) -> Result<(), RoutingError> {
    let bad = |reason: &str| RoutingError::InvalidRoute {
        task_type: task_type.to_string(),
        reason: reason.to_string(),
    };
    if path.first() != Some(&AgentId::Head) {
        return Err(bad("path must start at HEAD"));
    }
    if path.last() != Some(&AgentId::Fusion) {
        return Err(bad("path must end at FUSION"));
    }
    if path.len() > MAX_PATH_LEN {
        return Err(bad("path longer than the agent pool allows"));
    }
    if path[1..path.len() - 1].iter().any(|a| !a.is_specialist()) {
        return Err(bad("interior agents must be specialists"));
    }
    let mut seen = [false; AgentId::COUNT];
    for a in path {
        if std::mem::replace(&mut seen[a.index()], true) {
            return Err(bad("agent visited twice"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::Taxonomy;
    use AgentId::*;

    #[test]
    fn default_covers_taxonomy_and_is_acyclic() {
        let table = NominalRouteTable::benchmark_default();
        let tax = Taxonomy::benchmark_default();
        assert_eq!(table.len(), tax.len());
        for name in tax.names() {
            let t = TaskType::new(name.clone());
            // iterate sigma from HEAD
            let mut cur = Head;
            let mut visited = vec![cur];
            while let Some(next) = table.successor(&t, cur) {
                assert!(!visited.contains(&next), "{name} revisits {next}");
                visited.push(next);
                cur = next;
            }
            assert_eq!(cur, Fusion, "{name}");
            assert!(visited.len() <= MAX_PATH_LEN);
        }
    }

    #[test]
    fn successor_lookup() {
        let table = NominalRouteTable::benchmark_default();
        let t: TaskType = "STARK_SPATIOTEMPORAL_RELATIONSHIP".into();
        assert_eq!(table.successor(&t, Head), Some(Spatial));
        assert_eq!(table.successor(&t, Spatial), Some(Temporal));
        assert_eq!(table.successor(&t, Temporal), Some(Fusion));
        assert_eq!(table.successor(&t, Fusion), None);
        assert_eq!(table.successor(&t, Navigation), None);
        assert_eq!(table.first_specialist(&t), Some(Spatial));
        assert_eq!(table.successor(&TaskType::open(), Head), None);
    }

    #[test]
    fn invalid_paths_rejected() {
        let mut table = NominalRouteTable::new();
        assert!(table.insert("X", vec![Spatial, Fusion]).is_err());
        assert!(table.insert("X", vec![Head, Spatial]).is_err());
        assert!(table.insert("X", vec![Head, Spatial, Spatial, Fusion]).is_err());
        assert!(table.insert("X", vec![Head, Head, Fusion]).is_err());
        assert!(table.insert("X", vec![Head, Fusion]).is_ok());
    }
}
