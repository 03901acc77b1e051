//! Directed-graph topology, cascade onsets, lagged correlation and routing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use star_core::Real;

use crate::error::GraphError;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge<S> {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: S,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedGraph<S> {
    nodes: Vec<NodeId>,
    edges: Vec<Edge<S>>,
}

impl<S: Real> DirectedGraph<S> {
    /// Validates endpoints, node uniqueness and non-negative finite weights.
    pub fn new(nodes: Vec<NodeId>, edges: Vec<Edge<S>>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if !seen.insert(*n) {
                return Err(GraphError::DuplicateNode(*n));
            }
        }
        for e in &edges {
            for end in [e.from, e.to] {
                if !seen.contains(&end) {
                    return Err(GraphError::UnknownNode(end));
                }
            }
            if !(e.weight >= S::zero()) || !e.weight.is_finite() {
                return Err(GraphError::InvalidWeight { from: e.from, to: e.to });
            }
        }
        Ok(DirectedGraph { nodes, edges })
    }

    /// Unit-weight graph from `(from, to)` pairs.
    pub fn unweighted(nodes: Vec<NodeId>, pairs: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .map(|&(from, to)| Edge { from, to, weight: S::one() })
            .collect();
        Self::new(nodes, edges)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }

    /// Successors of `n` in ascending id order (duplicates removed).
    pub fn successors(&self, n: NodeId) -> Vec<NodeId> {
        let set: BTreeSet<NodeId> = self.edges.iter().filter(|e| e.from == n).map(|e| e.to).collect();
        set.into_iter().collect()
    }

    /// Cheapest parallel edge from `u` to `v`.
    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<S> {
        self.edges
            .iter()
            .filter(|e| e.from == u && e.to == v)
            .map(|e| e.weight)
            .fold(None, |acc: Option<S>, w| Some(acc.map_or(w, |a| a.min(w))))
    }

    fn sorted_nodes(&self) -> Vec<NodeId> {
        let mut v = self.nodes.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub cyclic: bool,
    /// Smallest-id node with in-degree 0.
    pub source: Option<NodeId>,
    /// Longest simple path by node count (lexicographically smallest among
    /// equals); empty when the graph is too large to search.
    pub longest_path: Vec<NodeId>,
    /// Node with the largest total degree; ties go to the smaller id.
    pub centrality_node: Option<NodeId>,
}

/// Graphs above this size skip the exhaustive longest-path search.
pub const LONGEST_PATH_MAX_NODES: usize = 20;

pub fn analyze_topology<S: Real>(g: &DirectedGraph<S>) -> TopologySummary {
    let nodes = g.sorted_nodes();
    let mut indeg: BTreeMap<NodeId, usize> = nodes.iter().map(|n| (*n, 0)).collect();
    let mut outdeg = indeg.clone();
    for e in &g.edges {
        *indeg.get_mut(&e.to).unwrap() += 1;
        *outdeg.get_mut(&e.from).unwrap() += 1;
    }
    let source = nodes.iter().copied().find(|n| indeg[n] == 0);
    let mut centrality_node = None;
    let mut best = 0;
    for n in &nodes {
        let d = indeg[n] + outdeg[n];
        if centrality_node.is_none() || d > best {
            best = d;
            centrality_node = Some(*n);
        }
    }
    let longest_path = if nodes.len() <= LONGEST_PATH_MAX_NODES {
        longest_simple_path(g, &nodes)
    } else {
        Vec::new()
    };
    TopologySummary {
        n_nodes: g.nodes.len(),
        n_edges: g.edges.len(),
        cyclic: has_cycle(g, &nodes),
        source,
        longest_path,
        centrality_node,
    }
}

fn has_cycle<S: Real>(g: &DirectedGraph<S>, nodes: &[NodeId]) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark: BTreeMap<NodeId, Mark> = nodes.iter().map(|n| (*n, Mark::New)).collect();
    for &root in nodes {
        if mark[&root] != Mark::New {
            continue;
        }
        // iterative DFS with explicit successor cursors
        let mut stack = vec![(root, g.successors(root), 0usize)];
        mark.insert(root, Mark::Open);
        while let Some((n, succ, i)) = stack.last_mut() {
            if *i < succ.len() {
                let next = succ[*i];
                *i += 1;
                match mark[&next] {
                    Mark::Open => return true,
                    Mark::New => {
                        mark.insert(next, Mark::Open);
                        let s = g.successors(next);
                        stack.push((next, s, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark.insert(*n, Mark::Done);
                stack.pop();
            }
        }
    }
    false
}

fn longest_simple_path<S: Real>(g: &DirectedGraph<S>, nodes: &[NodeId]) -> Vec<NodeId> {
    fn dfs<S: Real>(
        g: &DirectedGraph<S>,
        path: &mut Vec<NodeId>,
        on_path: &mut BTreeSet<NodeId>,
        best: &mut Vec<NodeId>,
        limit: usize,
    ) {
        if path.len() > best.len() || (path.len() == best.len() && *path < *best) {
            *best = path.clone();
        }
        if best.len() == limit {
            return;
        }
        let last = *path.last().unwrap();
        for next in g.successors(last) {
            if on_path.insert(next) {
                path.push(next);
                dfs(g, path, on_path, best, limit);
                path.pop();
                on_path.remove(&next);
            }
        }
    }
    let mut best = Vec::new();
    for &start in nodes {
        let mut path = vec![start];
        let mut on_path = BTreeSet::from([start]);
        dfs(g, &mut path, &mut on_path, &mut best, nodes.len());
    }
    best
}

/// Equal-length real series keyed by node.
pub type NodeSeries<S> = BTreeMap<NodeId, Vec<S>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadeReport<S> {
    pub onsets: BTreeMap<NodeId, usize>,
    /// Fraction of edges `(u, v)` with both onsets present and
    /// `onset(u) <= onset(v)`; `None` when no edge qualifies.
    pub consistency: Option<S>,
}

pub const DEFAULT_ONSET_THRESHOLD: f64 = 2.0;

/// Trailing window length used by the onset detector.
pub fn onset_window(len: usize) -> usize {
    (len / 8).max(4)
}

/// First index whose value deviates from the trailing-window mean by at
/// least `threshold` standard deviations. A flat window flags any change.
pub fn detect_onset<S: Real>(values: &[S], threshold: S) -> Option<usize> {
    let w = onset_window(values.len());
    let wn = S::from_usize_lossy(w);
    (w..values.len()).find(|&i| {
        let win = &values[i - w..i];
        let mean = win.iter().copied().sum::<S>() / wn;
        let var = win.iter().map(|v| (*v - mean).powi(2)).sum::<S>() / wn;
        let dev = (values[i] - mean).abs();
        if var == S::zero() {
            dev > S::zero()
        } else {
            dev >= threshold * var.sqrt()
        }
    })
}

pub fn detect_cascade<S: Real>(
    series: &NodeSeries<S>,
    g: &DirectedGraph<S>,
    threshold: S,
) -> Result<CascadeReport<S>, GraphError> {
    let mut len = None;
    for n in g.nodes() {
        let s = series.get(n).ok_or(GraphError::MissingSeries(*n))?;
        match len {
            None => len = Some(s.len()),
            Some(l) if l != s.len() => return Err(GraphError::LengthMismatch),
            _ => {}
        }
    }
    let len = len.unwrap_or(0);
    if !g.nodes().is_empty() && len < 4 {
        return Err(GraphError::InsufficientData { needed: 4, got: len });
    }
    let onsets: BTreeMap<NodeId, usize> = g
        .sorted_nodes()
        .into_iter()
        .filter_map(|n| detect_onset(&series[&n], threshold).map(|i| (n, i)))
        .collect();
    let (mut ok, mut total) = (0usize, 0usize);
    for e in g.edges() {
        if let (Some(u), Some(v)) = (onsets.get(&e.from), onsets.get(&e.to)) {
            total += 1;
            if u <= v {
                ok += 1;
            }
        }
    }
    let consistency =
        (total > 0).then(|| S::from_usize_lossy(ok) / S::from_usize_lossy(total));
    Ok(CascadeReport { onsets, consistency })
}

fn pearson<S: Real>(x: &[S], y: &[S]) -> Option<S> {
    let n = S::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<S>() / n;
    let my = y.iter().copied().sum::<S>() / n;
    let (mut sxy, mut sxx, mut syy) = (S::zero(), S::zero(), S::zero());
    for (a, b) in x.iter().zip(y) {
        sxy += (*a - mx) * (*b - my);
        sxx += (*a - mx).powi(2);
        syy += (*b - my).powi(2);
    }
    if sxx == S::zero() || syy == S::zero() {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).max(-S::one()).min(S::one()))
}

/// Lag in `[1, max_lag]` maximizing `|corr(xs[..n-lag], ys[lag..])|`;
/// ties go to the smallest lag.
pub fn pairwise_causality<S: Real>(xs: &[S], ys: &[S], max_lag: usize) -> Result<(usize, S), GraphError> {
    if xs.len() != ys.len() {
        return Err(GraphError::LengthMismatch);
    }
    let n = xs.len();
    if max_lag == 0 || n <= max_lag + 2 {
        return Err(GraphError::InsufficientData { needed: max_lag.max(1) + 3, got: n });
    }
    let mut best: Option<(usize, S)> = None;
    for lag in 1..=max_lag {
        if let Some(r) = pearson(&xs[..n - lag], &ys[lag..]) {
            if best.map_or(true, |(_, b)| r.abs() > b.abs()) {
                best = Some((lag, r));
            }
        }
    }
    best.ok_or(GraphError::ZeroVariance)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McqOption {
    pub label: String,
    pub expected_nodes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McqFilter {
    /// One 0/1 score per option, in input order.
    pub scores: Vec<(String, u8)>,
    pub tool_confidence: f64,
}

impl McqFilter {
    pub fn matching(&self) -> Vec<&str> {
        self.scores
            .iter()
            .filter(|(_, s)| *s == 1)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

/// Scores options whose stated node count equals the observed one.
pub fn mcq_structural_filter(summary: &TopologySummary, options: &[McqOption]) -> McqFilter {
    let scores: Vec<(String, u8)> = options
        .iter()
        .map(|o| (o.label.clone(), u8::from(o.expected_nodes == Some(summary.n_nodes))))
        .collect();
    let hits = scores.iter().filter(|(_, s)| *s == 1).count();
    let tool_confidence = match hits {
        0 => 0.0,
        1 => 1.0,
        _ => 0.5,
    };
    McqFilter { scores, tool_confidence }
}

/// Dijkstra over `(cost, node sequence)` labels: minimal cost, then the
/// lexicographically smallest path.
pub fn shortest_path<S: Real>(
    g: &DirectedGraph<S>,
    src: NodeId,
    dst: NodeId,
) -> Result<(Vec<NodeId>, S), GraphError> {
    for n in [src, dst] {
        if !g.contains(n) {
            return Err(GraphError::UnknownNode(n));
        }
    }
    let better = |a: &(S, Vec<NodeId>), b: &(S, Vec<NodeId>)| a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
    let mut label: BTreeMap<NodeId, (S, Vec<NodeId>)> = BTreeMap::new();
    let mut settled: BTreeSet<NodeId> = BTreeSet::new();
    label.insert(src, (S::zero(), vec![src]));
    loop {
        let next = label
            .iter()
            .filter(|(n, _)| !settled.contains(n))
            .fold(None, |acc: Option<(NodeId, &(S, Vec<NodeId>))>, (n, l)| match acc {
                Some((_, b)) if !better(l, b) => acc,
                _ => Some((*n, l)),
            })
            .map(|(n, _)| n);
        let Some(u) = next else {
            return Err(GraphError::NoPath { from: src, to: dst });
        };
        settled.insert(u);
        let (cost, path) = label[&u].clone();
        if u == dst {
            return Ok((path, cost));
        }
        for v in g.successors(u) {
            if settled.contains(&v) {
                continue;
            }
            let w = g.edge_weight(u, v).expect("successor has an edge");
            let mut p = path.clone();
            p.push(v);
            let cand = (cost + w, p);
            if label.get(&v).map_or(true, |cur| better(&cand, cur)) {
                label.insert(v, cand);
            }
        }
    }
}

/// Travel time along `path` at constant `speed`.
pub fn eta<S: Real>(path: &[NodeId], g: &DirectedGraph<S>, speed: S) -> Result<S, GraphError> {
    if !(speed > S::zero()) || !speed.is_finite() {
        return Err(GraphError::InvalidSpeed);
    }
    for n in path {
        if !g.contains(*n) {
            return Err(GraphError::UnknownNode(*n));
        }
    }
    let mut total = S::zero();
    for w in path.windows(2) {
        total += g
            .edge_weight(w[0], w[1])
            .ok_or(GraphError::BrokenPath { from: w[0], to: w[1] })?;
    }
    Ok(total / speed)
}
