//! Planar and geographic geometry: DE-9IM predicates, bearings, distances,
//! event intervals, localization and fuzzy region matching.

use std::fmt;
use std::str::FromStr;

use geo::Relate;
use serde::{Deserialize, Serialize};
use star_core::Real;

use crate::error::SpatialError;
use crate::temporal::Interval;

/// Mean Earth radius used by every spherical formula here.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Frame {
    /// `x` is longitude and `y` latitude, in degrees.
    Geographic,
    Planar,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
    pub frame: Frame,
}

impl<S: Real> Point<S> {
    pub fn planar(x: S, y: S) -> Self {
        Point { x, y, frame: Frame::Planar }
    }

    /// Geographic point; rejects out-of-range coordinates.
    pub fn geographic(lon: S, lat: S) -> Result<Self, SpatialError> {
        let p = Point { x: lon, y: lat, frame: Frame::Geographic };
        p.validate()?;
        Ok(p)
    }

    pub fn lon(&self) -> S {
        self.x
    }

    pub fn lat(&self) -> S {
        self.y
    }

    pub fn validate(&self) -> Result<(), SpatialError> {
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(SpatialError::OutOfRange("non-finite coordinate".into()));
        }
        if self.frame == Frame::Geographic {
            let lon = self.x.as_f64();
            let lat = self.y.as_f64();
            if !(-180.0..=180.0).contains(&lon) || !(-90.0..=90.0).contains(&lat) {
                return Err(SpatialError::OutOfRange(format!("({lon}, {lat})")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Point,
    Linestring,
    Polygon,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry<S> {
    pub kind: GeometryKind,
    pub vertices: Vec<Point<S>>,
}

impl<S: Real> Geometry<S> {
    pub fn point(p: Point<S>) -> Self {
        Geometry { kind: GeometryKind::Point, vertices: vec![p] }
    }

    pub fn linestring(vertices: Vec<Point<S>>) -> Result<Self, SpatialError> {
        let g = Geometry { kind: GeometryKind::Linestring, vertices };
        g.validate()?;
        Ok(g)
    }

    /// Polygon exterior ring. The ring must be explicitly closed.
    pub fn polygon(vertices: Vec<Point<S>>) -> Result<Self, SpatialError> {
        let g = Geometry { kind: GeometryKind::Polygon, vertices };
        g.validate()?;
        Ok(g)
    }

    pub fn frame(&self) -> Option<Frame> {
        self.vertices.first().map(|p| p.frame)
    }

    pub fn validate(&self) -> Result<(), SpatialError> {
        let bad = |m: &str| Err(SpatialError::InvalidGeometry(m.to_string()));
        for p in &self.vertices {
            p.validate()?;
        }
        if let Some(f) = self.frame() {
            if self.vertices.iter().any(|p| p.frame != f) {
                return Err(SpatialError::FrameMismatch);
            }
        }
        match self.kind {
            GeometryKind::Point if self.vertices.len() != 1 => bad("point needs exactly one vertex"),
            GeometryKind::Linestring if self.vertices.len() < 2 => bad("linestring needs at least 2 vertices"),
            GeometryKind::Polygon if self.vertices.len() < 4 => bad("polygon needs at least 4 vertices"),
            GeometryKind::Polygon if !same_xy(&self.vertices[0], self.vertices.last().unwrap()) => {
                bad("polygon ring is not closed")
            }
            _ => Ok(()),
        }
    }

    fn to_geo(&self) -> geo::Geometry<f64> {
        let coords: Vec<geo::Coord<f64>> = self
            .vertices
            .iter()
            .map(|p| geo::coord! { x: p.x.as_f64(), y: p.y.as_f64() })
            .collect();
        match self.kind {
            GeometryKind::Point => geo::Geometry::Point(geo::Point(coords[0])),
            GeometryKind::Linestring => geo::Geometry::LineString(geo::LineString(coords)),
            GeometryKind::Polygon => {
                geo::Geometry::Polygon(geo::Polygon::new(geo::LineString(coords), vec![]))
            }
        }
    }
}

fn same_xy<S: Real>(a: &Point<S>, b: &Point<S>) -> bool {
    a.x == b.x && a.y == b.y
}

/// The seven named DE-9IM predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialRelation {
    Contains,
    Crosses,
    Intersects,
    Within,
    Touches,
    Overlaps,
    Equals,
}

impl SpatialRelation {
    pub const ALL: [SpatialRelation; 7] = [
        SpatialRelation::Contains,
        SpatialRelation::Crosses,
        SpatialRelation::Intersects,
        SpatialRelation::Within,
        SpatialRelation::Touches,
        SpatialRelation::Overlaps,
        SpatialRelation::Equals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpatialRelation::Contains => "contains",
            SpatialRelation::Crosses => "crosses",
            SpatialRelation::Intersects => "intersects",
            SpatialRelation::Within => "within",
            SpatialRelation::Touches => "touches",
            SpatialRelation::Overlaps => "overlaps",
            SpatialRelation::Equals => "equals",
        }
    }

    /// The relation with its arguments swapped.
    pub fn converse(self) -> SpatialRelation {
        match self {
            SpatialRelation::Contains => SpatialRelation::Within,
            SpatialRelation::Within => SpatialRelation::Contains,
            other => other,
        }
    }
}

impl fmt::Display for SpatialRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpatialRelation {
    type Err = SpatialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        SpatialRelation::ALL
            .into_iter()
            .find(|r| r.name() == key || (key == "equal" && *r == SpatialRelation::Equals))
            .ok_or_else(|| SpatialError::UnknownRelation(s.to_string()))
    }
}

/// Evaluates a DE-9IM predicate in planar coordinates (geographic inputs are
/// treated as lon/lat on the plane).
pub fn spatial_predicate<S: Real>(
    relation: SpatialRelation,
    g1: &Geometry<S>,
    g2: &Geometry<S>,
) -> Result<bool, SpatialError> {
    g1.validate()?;
    g2.validate()?;
    if g1.frame() != g2.frame() {
        return Err(SpatialError::FrameMismatch);
    }
    let m = g1.to_geo().relate(&g2.to_geo());
    Ok(match relation {
        SpatialRelation::Contains => m.is_contains(),
        SpatialRelation::Crosses => m.is_crosses(),
        SpatialRelation::Intersects => m.is_intersects(),
        SpatialRelation::Within => m.is_within(),
        SpatialRelation::Touches => m.is_touches(),
        SpatialRelation::Overlaps => m.is_overlaps(),
        SpatialRelation::Equals => m.is_equal_topo(),
    })
}

fn require_geographic<S: Real>(p: &Point<S>) -> Result<(), SpatialError> {
    if p.frame != Frame::Geographic {
        return Err(SpatialError::WrongFrame("geographic"));
    }
    p.validate()
}

/// Great-circle initial bearing from `p` to `q`, degrees clockwise from
/// north in `[0, 360)`.
pub fn compass_bearing<S: Real>(p: &Point<S>, q: &Point<S>) -> Result<S, SpatialError> {
    require_geographic(p)?;
    require_geographic(q)?;
    if same_xy(p, q) {
        return Err(SpatialError::UndefinedBearing);
    }
    let (phi1, phi2) = (p.lat().to_radians(), q.lat().to_radians());
    let dl = (q.lon() - p.lon()).to_radians();
    let y = dl.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dl.cos();
    if y == S::zero() && x == S::zero() {
        // coincident or antipodal
        return Err(SpatialError::UndefinedBearing);
    }
    Ok(normalize_degrees(y.atan2(x).to_degrees()))
}

/// Maps any angle to `[0, 360)`.
pub fn normalize_degrees<S: Real>(deg: S) -> S {
    let full = S::lit(360.0);
    let r = deg % full;
    let r = if r < S::zero() { r + full } else { r };
    // -tiny % 360 + 360 can round to exactly 360
    if r >= full {
        S::zero()
    } else {
        r
    }
}

/// Boundary rule for the eight compass wedges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeRule {
    /// 45 degree wedges centered on N, NE, E, SE, S, SW, W, NW.
    #[default]
    Symmetric,
    /// North widened to [-33.75, 33.75); NE and NW shrink to keep a partition.
    WideNorth,
}

pub const WEDGE_NAMES: [&str; 8] = [
    "North", "Northeast", "East", "Southeast", "South", "Southwest", "West", "Northwest",
];

/// Option index (1 = North, clockwise to 8 = Northwest) for a bearing.
pub fn bearing_to_wedge<S: Real>(deg: S, rule: WedgeRule) -> u8 {
    let d = normalize_degrees(deg).as_f64();
    match rule {
        WedgeRule::Symmetric => (((d + 22.5) / 45.0).floor() as u8 % 8) + 1,
        WedgeRule::WideNorth => {
            if !(33.75..326.25).contains(&d) {
                1
            } else if d < 67.5 {
                2
            } else if d >= 292.5 {
                8
            } else {
                (((d + 22.5) / 45.0).floor() as u8 % 8) + 1
            }
        }
    }
}

/// Great-circle distance in meters.
pub fn haversine_distance<S: Real>(p: &Point<S>, q: &Point<S>) -> Result<S, SpatialError> {
    require_geographic(p)?;
    require_geographic(q)?;
    let (phi1, phi2) = (p.lat().to_radians(), q.lat().to_radians());
    let dphi = phi2 - phi1;
    let dl = (q.lon() - p.lon()).to_radians();
    let two = S::lit(2.0);
    let h = (dphi / two).sin().powi(2) + phi1.cos() * phi2.cos() * (dl / two).sin().powi(2);
    let h = h.min(S::one()).max(S::zero());
    Ok(two * S::lit(EARTH_RADIUS_M) * h.sqrt().asin())
}

/// Points paired with strictly increasing timestamps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedTrajectory<S> {
    points: Vec<Point<S>>,
    timestamps: Vec<S>,
}

impl<S: Real> TimedTrajectory<S> {
    pub fn new(points: Vec<Point<S>>, timestamps: Vec<S>) -> Result<Self, SpatialError> {
        if points.len() != timestamps.len() {
            return Err(SpatialError::InvalidTrajectory(format!(
                "{} points but {} timestamps",
                points.len(),
                timestamps.len()
            )));
        }
        if points.is_empty() {
            return Err(SpatialError::InvalidTrajectory("no points".into()));
        }
        if timestamps.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SpatialError::InvalidTrajectory(
                "timestamps must be strictly increasing".into(),
            ));
        }
        for p in &points {
            p.validate()?;
        }
        if points.iter().any(|p| p.frame != points[0].frame) {
            return Err(SpatialError::FrameMismatch);
        }
        Ok(TimedTrajectory { points, timestamps })
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn timestamps(&self) -> &[S] {
        &self.timestamps
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Real + Serialize", deserialize = "S: Real + Deserialize<'de>"))]
pub struct EventInterval<S> {
    pub holds: bool,
    pub interval: Option<Interval<S>>,
}

/// Evaluates `relation(vertex, g)` at every trajectory vertex and spans the
/// first and last satisfying timestamps.
pub fn predicate_with_event_interval<S: Real>(
    relation: SpatialRelation,
    traj: &TimedTrajectory<S>,
    g: &Geometry<S>,
) -> Result<EventInterval<S>, SpatialError> {
    let mut first = None;
    let mut last = None;
    for (i, p) in traj.points.iter().enumerate() {
        if spatial_predicate(relation, &Geometry::point(*p), g)? {
            first.get_or_insert(i);
            last = Some(i);
        }
    }
    Ok(match (first, last) {
        (Some(i), Some(j)) => EventInterval {
            holds: true,
            interval: Some(Interval::from_ordered(traj.timestamps[i], traj.timestamps[j])),
        },
        _ => EventInterval { holds: false, interval: None },
    })
}

/// One localization constraint: a bearing from the anchor (degrees clockwise
/// from north), a range to it, or both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation<S> {
    pub anchor: Point<S>,
    pub bearing: Option<S>,
    pub range: Option<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Localization<S> {
    pub point: Point<S>,
    /// Root-mean-square constraint residual, in planar units or meters.
    pub residual: S,
}

enum Constraint {
    Line { a: [f64; 2], d: [f64; 2] },
    Circle { c: [f64; 2], r: f64 },
}

impl Constraint {
    fn residual(&self, p: [f64; 2]) -> f64 {
        match self {
            Constraint::Line { a, d } => cross(*d, sub(p, *a)),
            Constraint::Circle { c, r } => norm(sub(p, *c)) - r,
        }
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            Constraint::Line { d, .. } => [-d[1], d[0]],
            Constraint::Circle { c, .. } => {
                let v = sub(p, *c);
                let n = norm(v);
                if n == 0.0 {
                    [0.0, 0.0]
                } else {
                    [v[0] / n, v[1] / n]
                }
            }
        }
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

const DEGENERACY_EPS: f64 = 1e-12;

/// Candidate points satisfying a pair of constraints exactly (or as closely
/// as possible when they do not meet).
fn pair_candidates(a: &Constraint, b: &Constraint) -> Vec<[f64; 2]> {
    match (a, b) {
        (Constraint::Line { a: p, d: u }, Constraint::Line { a: q, d: v }) => {
            let den = cross(*u, *v);
            if den.abs() < DEGENERACY_EPS {
                return vec![];
            }
            let t = cross(sub(*q, *p), *v) / den;
            vec![[p[0] + t * u[0], p[1] + t * u[1]]]
        }
        (Constraint::Line { a: p, d: u }, Constraint::Circle { c, r })
        | (Constraint::Circle { c, r }, Constraint::Line { a: p, d: u }) => {
            // |p + t u - c| = r with |u| = 1
            let w = sub(*p, *c);
            let bq = u[0] * w[0] + u[1] * w[1];
            let disc = bq * bq - (w[0] * w[0] + w[1] * w[1] - r * r);
            let ts = if disc < 0.0 {
                vec![-bq]
            } else {
                vec![-bq - disc.sqrt(), -bq + disc.sqrt()]
            };
            ts.into_iter().map(|t| [p[0] + t * u[0], p[1] + t * u[1]]).collect()
        }
        (Constraint::Circle { c: c1, r: r1 }, Constraint::Circle { c: c2, r: r2 }) => {
            let v = sub(*c2, *c1);
            let d = norm(v);
            if d < DEGENERACY_EPS {
                return vec![];
            }
            let e = [v[0] / d, v[1] / d];
            let perp = [-e[1], e[0]];
            let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let h2 = r1 * r1 - x * x;
            if h2 < 0.0 {
                // closest approach along the center line
                let x = x.clamp(-*r1, *r1);
                return vec![[c1[0] + x * e[0], c1[1] + x * e[1]]];
            }
            let h = h2.sqrt();
            let base = [c1[0] + x * e[0], c1[1] + x * e[1]];
            vec![
                [base[0] + h * perp[0], base[1] + h * perp[1]],
                [base[0] - h * perp[0], base[1] - h * perp[1]],
            ]
        }
    }
}

fn sum_sq(cs: &[Constraint], p: [f64; 2]) -> f64 {
    cs.iter().map(|c| c.residual(p).powi(2)).sum()
}

/// Gauss-Newton refinement; keeps the start point if a step does not help.
fn refine(cs: &[Constraint], mut p: [f64; 2]) -> [f64; 2] {
    for _ in 0..50 {
        let (mut jtj, mut jtr) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
        for c in cs {
            let g = c.gradient(p);
            let r = c.residual(p);
            for i in 0..2 {
                jtr[i] += g[i] * r;
                for j in 0..2 {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < DEGENERACY_EPS {
            break;
        }
        let step = [
            (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det,
            (jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det,
        ];
        let next = [p[0] - step[0], p[1] - step[1]];
        if sum_sq(cs, next) >= sum_sq(cs, p) {
            break;
        }
        p = next;
        if norm(step) < 1e-13 * (1.0 + norm(p)) {
            break;
        }
    }
    p
}

/// Least-squares position from bearing and range observations.
///
/// Bearings are treated as full lines through their anchors. Geographic
/// inputs are solved on a local equirectangular plane (meters) around the
/// mean anchor. When two ranges meet at two points the one nearer the
/// remaining constraints wins; a pure two-circle problem keeps the point on
/// the left of the first-to-second anchor direction.
pub fn localize<S: Real>(observations: &[Observation<S>]) -> Result<Localization<S>, SpatialError> {
    if observations.len() < 2 {
        return Err(SpatialError::InsufficientConstraints(
            "at least two observations are required".into(),
        ));
    }
    let frame = observations[0].anchor.frame;
    for o in observations {
        o.anchor.validate()?;
        if o.anchor.frame != frame {
            return Err(SpatialError::FrameMismatch);
        }
    }
    let n = observations.len() as f64;
    let lon0 = observations.iter().map(|o| o.anchor.x.as_f64()).sum::<f64>() / n;
    let lat0 = observations.iter().map(|o| o.anchor.y.as_f64()).sum::<f64>() / n;
    let k = EARTH_RADIUS_M.to_radians();
    let kx = k * lat0.to_radians().cos();
    let project = |p: &Point<S>| -> [f64; 2] {
        match frame {
            Frame::Planar => [p.x.as_f64(), p.y.as_f64()],
            Frame::Geographic => [(p.x.as_f64() - lon0) * kx, (p.y.as_f64() - lat0) * k],
        }
    };

    let mut cs = Vec::new();
    for o in observations {
        let a = project(&o.anchor);
        if let Some(b) = o.bearing {
            let t = b.as_f64().to_radians();
            cs.push(Constraint::Line { a, d: [t.sin(), t.cos()] });
        }
        if let Some(r) = o.range {
            let r = r.as_f64();
            if !(r >= 0.0 && r.is_finite()) {
                return Err(SpatialError::InsufficientConstraints(format!("invalid range {r}")));
            }
            cs.push(Constraint::Circle { c: a, r });
        }
    }
    if cs.len() < 2 {
        return Err(SpatialError::InsufficientConstraints(
            "need two bearings, two ranges, or one of each".into(),
        ));
    }

    let mut best: Option<([f64; 2], f64)> = None;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            for cand in pair_candidates(&cs[i], &cs[j]) {
                let p = refine(&cs, cand);
                let e = sum_sq(&cs, p);
                let better = match best {
                    None => true,
                    Some((_, be)) => e < be - 1e-12 * (1.0 + be),
                };
                if better {
                    best = Some((p, e));
                }
            }
        }
    }
    let (p, e) = best.ok_or_else(|| {
        SpatialError::NoSolution("constraints are parallel or concentric".into())
    })?;
    let point = match frame {
        Frame::Planar => Point::planar(S::lit(p[0]), S::lit(p[1])),
        Frame::Geographic => Point {
            x: S::lit(lon0 + p[0] / kx),
            y: S::lit(lat0 + p[1] / k),
            frame,
        },
    };
    Ok(Localization {
        point,
        residual: S::lit((e / cs.len() as f64).sqrt()),
    })
}

/// Result of matching a place name against multiple-choice options.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionMatch {
    pub index: usize,
    pub score: f64,
    pub scores: Vec<f64>,
}

/// Shortest substring match that counts towards a score.
const MIN_MATCH: usize = 3;

fn tokens(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

fn longest_common_substring(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut best = 0;
    for x in a {
        let mut cur = vec![0usize; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            if x == y {
                cur[j + 1] = prev[j] + 1;
                best = best.max(cur[j + 1]);
            }
        }
        prev = cur;
    }
    best
}

/// Token-normalized longest-common-substring similarity of `option` inside
/// `name`, in `[0, 1]`.
pub fn region_similarity(name: &str, option: &str) -> f64 {
    let hay: Vec<char> = tokens(name).join(" ").chars().collect();
    let toks = tokens(option);
    let long: Vec<&String> = toks.iter().filter(|t| t.chars().count() >= MIN_MATCH).collect();
    // short tokens such as state codes only count when nothing else is left
    let used: Vec<&String> = if long.is_empty() { toks.iter().collect() } else { long };
    let total: usize = used.iter().map(|t| t.chars().count()).sum();
    if total == 0 {
        return 0.0;
    }
    let matched: usize = used
        .iter()
        .map(|t| {
            let tc: Vec<char> = t.chars().collect();
            let m = longest_common_substring(&tc, &hay);
            if m >= MIN_MATCH.min(tc.len()) {
                m
            } else {
                0
            }
        })
        .sum();
    matched as f64 / total as f64
}

/// Best option for a geocoded name; ties keep the lowest index.
pub fn admin_region_match(geocoded_name: &str, options: &[String]) -> Result<RegionMatch, SpatialError> {
    if options.is_empty() {
        return Err(SpatialError::NoOptions);
    }
    let scores: Vec<f64> = options.iter().map(|o| region_similarity(geocoded_name, o)).collect();
    let mut index = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[index] {
            index = i;
        }
    }
    Ok(RegionMatch { index, score: scores[index], scores })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(lon: f64, lat: f64) -> Point<f64> {
        Point::geographic(lon, lat).unwrap()
    }

    #[test]
    fn wedge_centers() {
        for (i, c) in [0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0].iter().enumerate() {
            assert_eq!(bearing_to_wedge(*c, WedgeRule::Symmetric), i as u8 + 1);
            assert_eq!(bearing_to_wedge(*c, WedgeRule::WideNorth), i as u8 + 1);
        }
        assert_eq!(bearing_to_wedge(10.0, WedgeRule::Symmetric), 1);
        assert_eq!(bearing_to_wedge(27.3, WedgeRule::Symmetric), 2);
        assert_eq!(bearing_to_wedge(27.3, WedgeRule::WideNorth), 1);
        assert_eq!(bearing_to_wedge(337.5, WedgeRule::Symmetric), 1);
        assert_eq!(bearing_to_wedge(337.4, WedgeRule::Symmetric), 8);
        assert_eq!(bearing_to_wedge(326.25, WedgeRule::WideNorth), 1);
        assert_eq!(bearing_to_wedge(33.75, WedgeRule::WideNorth), 2);
    }

    #[test]
    fn trivial_bearings() {
        assert!((compass_bearing(&geo(10.0, 0.0), &geo(10.0, 5.0)).unwrap()).abs() < 1e-12);
        assert!((compass_bearing(&geo(0.0, 0.0), &geo(1.0, 0.0)).unwrap() - 90.0).abs() < 1e-12);
        assert!(compass_bearing(&geo(1.0, 1.0), &geo(1.0, 1.0)).is_err());
    }

    #[test]
    fn haversine_one_degree() {
        let d = haversine_distance(&geo(0.0, 0.0), &geo(1.0, 0.0)).unwrap();
        assert!((d - EARTH_RADIUS_M * 1f64.to_radians()).abs() < 1e-6);
        assert!((d - 111_195.0).abs() < 1.0);
    }

    #[test]
    fn open_polygon_rejected() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
            .map(|(x, y)| Point::planar(x, y))
            .to_vec();
        assert!(Geometry::polygon(pts).is_err());
    }

    #[test]
    fn similarity_edges() {
        assert_eq!(region_similarity("Lansdowne, PA", "Lansdowne, PA"), 1.0);
        assert_eq!(region_similarity("abc def", "xyz"), 0.0);
        assert_eq!(region_similarity("Paris", "PA"), 1.0);
    }
}
