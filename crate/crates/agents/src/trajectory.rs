//! Trajectory specialist operations.

use serde_json::{json, Value};

use star_core::Real;
use star_toolkit::spatial::{
    haversine_distance, predicate_with_event_interval, spatial_predicate, Frame, Geometry, Point, SpatialRelation,
    TimedTrajectory,
};

use crate::error::TrajectoryError;

pub const DEFAULT_ANOMALY_FACTOR: f64 = 3.0;
pub const DEFAULT_PREDICT_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum TrajectoryOp {
    Anomaly { factor: f64 },
    Predict { horizon: usize, k: usize },
    RegionClassify { region: Geometry<f64> },
}

fn step_length<S: Real>(a: &Point<S>, b: &Point<S>) -> Result<S, TrajectoryError> {
    Ok(match a.frame {
        Frame::Geographic => haversine_distance(a, b)?,
        Frame::Planar => (b.x - a.x).hypot(b.y - a.y),
    })
}

fn median<S: Real>(mut v: Vec<S>) -> S {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite steps"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / S::lit(2.0)
    }
}

/// Indices `i` whose incoming step `p[i-1] -> p[i]` is longer than the
/// median step times `factor`.
pub fn detect_anomalies<S: Real>(traj: &TimedTrajectory<S>, factor: S) -> Result<Vec<usize>, TrajectoryError> {
    let pts = traj.points();
    if pts.len() < 3 {
        return Err(TrajectoryError::InsufficientData { needed: 3, got: pts.len() });
    }
    if !(factor > S::zero()) {
        return Err(TrajectoryError::InvalidArgument("factor must be positive".into()));
    }
    let steps = pts
        .windows(2)
        .map(|w| step_length(&w[0], &w[1]))
        .collect::<Result<Vec<S>, _>>()?;
    let limit = median(steps.clone()) * factor;
    Ok(steps
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > limit)
        .map(|(i, _)| i + 1)
        .collect())
}

/// Least-squares line through `(t, v)`; returns `(slope, intercept)`.
fn fit<S: Real>(ts: &[S], vs: &[S]) -> (S, S) {
    let n = S::from_usize_lossy(ts.len());
    let mt = ts.iter().copied().sum::<S>() / n;
    let mv = vs.iter().copied().sum::<S>() / n;
    let mut num = S::zero();
    let mut den = S::zero();
    for (t, v) in ts.iter().zip(vs) {
        num += (*t - mt) * (*v - mv);
        den += (*t - mt) * (*t - mt);
    }
    let slope = if den > S::zero() { num / den } else { S::zero() };
    (slope, mv - slope * mt)
}

/// Extrapolates the last `k` points linearly in time for `horizon` steps of
/// the window's mean sampling interval.
pub fn predict_linear<S: Real>(
    traj: &TimedTrajectory<S>,
    horizon: usize,
    k: usize,
) -> Result<Vec<(S, Point<S>)>, TrajectoryError> {
    let n = traj.len();
    if n < 3 {
        return Err(TrajectoryError::InsufficientData { needed: 3, got: n });
    }
    let k = k.clamp(2, n);
    let ts = &traj.timestamps()[n - k..];
    let pts = &traj.points()[n - k..];
    let xs: Vec<S> = pts.iter().map(|p| p.x).collect();
    let ys: Vec<S> = pts.iter().map(|p| p.y).collect();
    let (ax, bx) = fit(ts, &xs);
    let (ay, by) = fit(ts, &ys);
    let dt = (ts[k - 1] - ts[0]) / S::from_usize_lossy(k - 1);
    let frame = pts[0].frame;
    Ok((1..=horizon)
        .map(|j| {
            let t = ts[k - 1] + dt * S::from_usize_lossy(j);
            (t, Point { x: ax * t + bx, y: ay * t + by, frame })
        })
        .collect())
}

/// Whether the whole trajectory lies in `region`, plus the span of
/// timestamps whose vertices do.
pub fn region_classify<S: Real>(
    traj: &TimedTrajectory<S>,
    region: &Geometry<S>,
) -> Result<(bool, Option<[S; 2]>), TrajectoryError> {
    let pts = traj.points().to_vec();
    let whole = if pts.len() == 1 { Geometry::point(pts[0]) } else { Geometry::linestring(pts)? };
    let within = spatial_predicate(SpatialRelation::Within, &whole, region)?;
    let ev = predicate_with_event_interval(SpatialRelation::Within, traj, region)?;
    Ok((within, ev.interval.map(|i| [i.start(), i.end()])))
}

/// JSON-facing dispatcher used by the TRAJECTORY agent.
pub fn trajectory_ops(op: &TrajectoryOp, traj: &TimedTrajectory<f64>) -> Result<Value, TrajectoryError> {
    Ok(match op {
        TrajectoryOp::Anomaly { factor } => {
            let idx = detect_anomalies(traj, *factor)?;
            json!({"anomalies": idx, "has_anomaly": !idx.is_empty()})
        }
        TrajectoryOp::Predict { horizon, k } => {
            let pred = predict_linear(traj, *horizon, *k)?;
            let points: Vec<[f64; 2]> = pred.iter().map(|(_, p)| [p.x, p.y]).collect();
            let times: Vec<f64> = pred.iter().map(|(t, _)| *t).collect();
            json!({"predicted": points, "timestamps": times})
        }
        TrajectoryOp::RegionClassify { region } => {
            let (within, interval) = region_classify(traj, region)?;
            json!({"within": within, "event_interval": interval})
        }
    })
}
