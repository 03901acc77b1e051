use serde_json::{json, Value};

use star_toolkit::spatial::{
    admin_region_match, bearing_to_wedge, compass_bearing, haversine_distance, localize, predicate_with_event_interval,
    spatial_predicate, Frame, Localization, Observation, Point, SpatialRelation, TimedTrajectory, WedgeRule,
    WEDGE_NAMES,
};

use super::{Args, ComputeCtx};
use crate::error::ComputeError;
use crate::geocode::geocode_lookup;
use crate::parse::direction_wedge;

pub fn run(op: &str, a: &Args, ctx: &ComputeCtx) -> Result<Value, ComputeError> {
    if let Ok(rel) = op.parse::<SpatialRelation>() {
        return relation(rel, a, a.flag("compute_event_interval")?);
    }
    match op {
        "compass_direction" => compass(a, wedge_rule(a, ctx)?),
        "haversine_distance" => {
            let p = a.point("geom_1", Frame::Geographic)?;
            let q = a.point("geom_2", Frame::Geographic)?;
            let d = haversine_distance(&p, &q)?;
            Ok(json!({"distance_m": d, "distance_km": d / 1000.0}))
        }
        "landmark_direction" => landmark(a, ctx),
        "admin_region_lookup" => admin_region(a, ctx),
        "compute_event_interval" => {
            let rel = match a.opt::<String>("relation")? {
                Some(r) => r.parse()?,
                None => SpatialRelation::Within,
            };
            relation(rel, a, true)
        }
        "localization" => localization(a),
        other => Err(ComputeError::invalid(format!("unknown spatial operation `{other}`"))),
    }
}

fn wedge_rule(a: &Args, ctx: &ComputeCtx) -> Result<WedgeRule, ComputeError> {
    Ok(match a.opt::<String>("wedge_rule")?.as_deref() {
        None => ctx.env.wedge_rule,
        Some("symmetric") => WedgeRule::Symmetric,
        Some("wide_north") => WedgeRule::WideNorth,
        Some(other) => return Err(ComputeError::invalid(format!("unknown wedge rule `{other}`"))),
    })
}

/// Whole-geometry predicate; with `event` the trajectory is also tested
/// vertex by vertex and the satisfying time span reported. In that mode
/// `spatial_relation_holds` says whether the event occurs at all.
fn relation(rel: SpatialRelation, a: &Args, event: bool) -> Result<Value, ComputeError> {
    let frame = a.frame()?;
    let g1 = a.geometry("geom_1", None, frame)?;
    let g2 = a.geometry("geom_2", None, frame)?;
    let whole = spatial_predicate(rel, &g1, &g2)?;
    let mut out = json!({"relation": rel.name(), rel.name(): whole, "spatial_relation_holds": whole});
    if event {
        let ts: Vec<f64> = a.get("timestamps")?;
        let traj = TimedTrajectory::new(g1.vertices.clone(), ts)?;
        let ev = predicate_with_event_interval(rel, &traj, &g2)?;
        out["spatial_relation_holds"] = json!(ev.holds);
        out["event_interval"] = json!(ev.interval.map(|i| [i.start(), i.end()]));
    }
    Ok(out)
}

fn direction_record(p: &Point<f64>, q: &Point<f64>, rule: WedgeRule) -> Result<Value, ComputeError> {
    let bearing = compass_bearing(p, q)?;
    let wedge = bearing_to_wedge(bearing, rule);
    Ok(json!({
        "direction_result": wedge,
        "direction_name": WEDGE_NAMES[wedge as usize - 1],
        "bearing_deg": bearing,
    }))
}

fn compass(a: &Args, rule: WedgeRule) -> Result<Value, ComputeError> {
    let p = a.point("geom_1", Frame::Geographic)?;
    let q = a.point("geom_2", Frame::Geographic)?;
    direction_record(&p, &q, rule)
}

/// Coordinates for a landmark: a literal `[lon, lat]`, or a name found in
/// `navigation_data.poi_registry` on the board.
fn ground_landmark(v: &Value, ctx: &ComputeCtx) -> Option<Point<f64>> {
    let c: [f64; 2] = match v {
        Value::String(name) => {
            let reg = ctx.bb.lookup("navigation_data.poi_registry")?;
            serde_json::from_value(reg.get(name.as_str())?.clone()).ok()?
        }
        other if ctx.resolved => serde_json::from_value(other.clone()).ok()?,
        _ => return None,
    };
    Point::geographic(c[0], c[1]).ok()
}

fn landmark(a: &Args, ctx: &ComputeCtx) -> Result<Value, ComputeError> {
    let (v1, v2) = (a.raw("geom_1"), a.raw("geom_2"));
    let proposed: String = a.get("proposed_direction")?;
    let wanted = direction_wedge(&proposed)
        .ok_or_else(|| ComputeError::invalid(format!("unknown direction `{proposed}`")))?;
    let grounded = v1.zip(v2).and_then(|(x, y)| Some((ground_landmark(x, ctx)?, ground_landmark(y, ctx)?)));
    let Some((p, q)) = grounded else {
        let names: Vec<Value> = [v1, v2].into_iter().flatten().cloned().collect();
        return Err(ComputeError::Missing {
            key: "landmark_coordinates".into(),
            detail: json!({"raw_names": names}),
        });
    };
    let mut out = direction_record(&p, &q, wedge_rule(a, ctx)?)?;
    out["proposed_direction"] = json!(proposed);
    out["direction_holds"] = json!(out["direction_result"] == json!(wanted));
    Ok(out)
}

fn admin_region(a: &Args, ctx: &ComputeCtx) -> Result<Value, ComputeError> {
    let coords: Vec<Value> = a.get("coordinates")?;
    let first = coords.first().ok_or_else(|| ComputeError::invalid("no coordinates"))?;
    let (lon, lat) = match (first.get("longitude"), first.get("latitude")) {
        (Some(lon), Some(lat)) => (lon.as_f64(), lat.as_f64()),
        _ => {
            let c: [f64; 2] = serde_json::from_value(first.clone()).map_err(|e| ComputeError::invalid(e.to_string()))?;
            (Some(c[0]), Some(c[1]))
        }
    };
    let (lon, lat) = lon.zip(lat).ok_or_else(|| ComputeError::invalid("coordinates must be numeric"))?;
    let p = Point::geographic(lon, lat)?;
    let options: Vec<String> = a.get("options")?;
    let geocoder = ctx.env.geocoder.as_ref().ok_or_else(|| ComputeError::missing("geocoder"))?;
    let name = geocode_lookup(&p, geocoder).map_err(|e| ComputeError::Missing {
        key: "geocoded_name".into(),
        detail: json!({"reason": e.to_string()}),
    })?;
    let m = admin_region_match(&name, &options)?;
    Ok(json!({
        "geocoded_name": name,
        "matched_option": m.index,
        "match_score": m.score,
        "option_scores": m.scores,
    }))
}

fn localization(a: &Args) -> Result<Value, ComputeError> {
    let frame = a.frame()?;
    let raw: Vec<Value> = a.get("observations")?;
    let mut obs = Vec::with_capacity(raw.len());
    for o in &raw {
        let sub = o.as_object().ok_or_else(|| ComputeError::invalid("observation must be a record"))?;
        let oa = Args::new(sub);
        obs.push(Observation {
            anchor: oa.point("anchor", frame)?,
            bearing: oa.opt_f64("bearing")?,
            range: oa.opt_f64("range")?,
        });
    }
    let Localization { point, residual } = localize(&obs)?;
    Ok(json!({"location": [point.x, point.y], "residual": residual}))
}
