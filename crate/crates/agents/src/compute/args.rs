//! Typed access to JSON parameters; every decoding failure is `Invalid`.

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use star_toolkit::graph::{DirectedGraph, Edge, NodeId};
use star_toolkit::spatial::{Frame, Geometry, GeometryKind, Point, TimedTrajectory};
use star_toolkit::temporal::Interval;

use crate::error::ComputeError;

pub struct Args<'a> {
    map: &'a Map<String, Value>,
}

fn bad(name: &str, what: impl std::fmt::Display) -> ComputeError {
    ComputeError::invalid(format!("parameter `{name}`: {what}"))
}

impl<'a> Args<'a> {
    pub fn new(map: &'a Map<String, Value>) -> Self {
        Args { map }
    }

    pub fn raw(&self, name: &str) -> Option<&'a Value> {
        self.map.get(name).filter(|v| !v.is_null())
    }

    pub fn get<T: DeserializeOwned>(&self, name: &str) -> Result<T, ComputeError> {
        let v = self.raw(name).ok_or_else(|| bad(name, "missing"))?;
        serde_json::from_value(v.clone()).map_err(|e| bad(name, e))
    }

    pub fn opt<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>, ComputeError> {
        match self.raw(name) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| bad(name, e)),
        }
    }

    pub fn f64(&self, name: &str) -> Result<f64, ComputeError> {
        let v: f64 = self.get(name)?;
        if !v.is_finite() {
            return Err(bad(name, "not finite"));
        }
        Ok(v)
    }

    pub fn opt_f64(&self, name: &str) -> Result<Option<f64>, ComputeError> {
        self.opt(name)
    }

    pub fn usize(&self, name: &str) -> Result<usize, ComputeError> {
        self.get(name)
    }

    pub fn opt_usize(&self, name: &str) -> Result<Option<usize>, ComputeError> {
        self.opt(name)
    }

    pub fn flag(&self, name: &str) -> Result<bool, ComputeError> {
        Ok(self.opt(name)?.unwrap_or(false))
    }

    pub fn frame(&self) -> Result<Frame, ComputeError> {
        match self.opt::<String>("frame")?.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("planar") => Ok(Frame::Planar),
            Some("geographic") => Ok(Frame::Geographic),
            Some(other) => Err(bad("frame", format!("unknown frame `{other}`"))),
        }
    }

    /// `[x, y]` or `[[x, y], ...]`.
    pub fn coords(&self, name: &str) -> Result<Vec<[f64; 2]>, ComputeError> {
        let v = self.raw(name).ok_or_else(|| bad(name, "missing"))?;
        let single: Result<[f64; 2], _> = serde_json::from_value(v.clone());
        let list = match single {
            Ok(p) => vec![p],
            Err(_) => serde_json::from_value(v.clone()).map_err(|e| bad(name, e))?,
        };
        if list.iter().flatten().any(|c| !c.is_finite()) {
            return Err(bad(name, "non-finite coordinate"));
        }
        Ok(list)
    }

    pub fn point(&self, name: &str, frame: Frame) -> Result<Point<f64>, ComputeError> {
        let c = self.coords(name)?;
        if c.len() != 1 {
            return Err(bad(name, "expected a single coordinate pair"));
        }
        make_point(c[0], frame)
    }

    /// Geometry from `name`, with the kind taken from `<name>_type`, the
    /// given default, or inferred (one vertex: point; closed ring of 4+:
    /// polygon; otherwise linestring).
    pub fn geometry(&self, name: &str, default_kind: Option<&str>, frame: Frame) -> Result<Geometry<f64>, ComputeError> {
        let coords = self.coords(name)?;
        let pts = coords.iter().map(|c| make_point(*c, frame)).collect::<Result<Vec<_>, _>>()?;
        let declared = self.opt::<String>(&format!("{name}_type"))?;
        let kind = match declared.as_deref().or(default_kind).map(str::to_ascii_lowercase).as_deref() {
            Some("point") => GeometryKind::Point,
            Some("linestring") | Some("line") | Some("trajectory") => GeometryKind::Linestring,
            Some("polygon") => GeometryKind::Polygon,
            Some(other) => return Err(bad(name, format!("unknown geometry type `{other}`"))),
            None if pts.len() == 1 => GeometryKind::Point,
            None if pts.len() >= 4 && pts[0].x == pts[pts.len() - 1].x && pts[0].y == pts[pts.len() - 1].y => {
                GeometryKind::Polygon
            }
            None => GeometryKind::Linestring,
        };
        let g = match kind {
            GeometryKind::Point if pts.len() == 1 => Geometry::point(pts[0]),
            GeometryKind::Point => return Err(bad(name, "point needs one vertex")),
            GeometryKind::Linestring => Geometry::linestring(pts)?,
            GeometryKind::Polygon => Geometry::polygon(pts)?,
        };
        Ok(g)
    }

    /// Points plus timestamps; missing timestamps default to `0, 1, 2, ...`.
    pub fn trajectory(&self, points: &str, stamps: &str) -> Result<TimedTrajectory<f64>, ComputeError> {
        let frame = self.frame()?;
        let pts = self
            .coords(points)?
            .into_iter()
            .map(|c| make_point(c, frame))
            .collect::<Result<Vec<_>, _>>()?;
        let ts: Vec<f64> = match self.opt(stamps)? {
            Some(ts) => ts,
            None => (0..pts.len()).map(|i| i as f64).collect(),
        };
        Ok(TimedTrajectory::new(pts, ts)?)
    }

    pub fn interval(&self, name: &str) -> Result<Interval<f64>, ComputeError> {
        let [s, e]: [f64; 2] = self.get(name)?;
        Ok(Interval::new(s, e)?)
    }

    pub fn intervals(&self, name: &str) -> Result<Vec<Interval<f64>>, ComputeError> {
        let raw: Vec<[f64; 2]> = self.get(name)?;
        raw.into_iter()
            .map(|[s, e]| Interval::new(s, e).map_err(ComputeError::from))
            .collect()
    }

    /// Graph from `edges` (`[u, v]` or `[u, v, w]`) and optional `nodes`;
    /// nodes default to every edge endpoint.
    pub fn graph(&self) -> Result<DirectedGraph<f64>, ComputeError> {
        let raw: Vec<Vec<f64>> = self.get("edges")?;
        let mut edges = Vec::with_capacity(raw.len());
        for e in raw {
            let id = |x: f64| -> Result<NodeId, ComputeError> {
                if x >= 0.0 && x.fract() == 0.0 {
                    Ok(x as NodeId)
                } else {
                    Err(bad("edges", format!("node id {x} is not a non-negative integer")))
                }
            };
            let (from, to, weight) = match e.as_slice() {
                [u, v] => (id(*u)?, id(*v)?, 1.0),
                [u, v, w] => (id(*u)?, id(*v)?, *w),
                _ => return Err(bad("edges", "each edge is [u, v] or [u, v, w]")),
            };
            edges.push(Edge { from, to, weight });
        }
        let nodes: Vec<NodeId> = match self.opt("nodes")? {
            Some(n) => n,
            None => {
                let mut n: Vec<NodeId> = edges.iter().flat_map(|e| [e.from, e.to]).collect();
                n.sort_unstable();
                n.dedup();
                n
            }
        };
        Ok(DirectedGraph::new(nodes, edges)?)
    }
}

fn make_point(c: [f64; 2], frame: Frame) -> Result<Point<f64>, ComputeError> {
    Ok(match frame {
        Frame::Planar => Point::planar(c[0], c[1]),
        Frame::Geographic => Point::geographic(c[0], c[1])?,
    })
}
