use serde_json::{json, Value};

use star_toolkit::graph::{eta, shortest_path};
use star_toolkit::GraphError;

use super::Args;
use crate::error::ComputeError;

pub fn run(op: &str, a: &Args) -> Result<Value, ComputeError> {
    let g = a.graph()?;
    let (o, d) = (a.usize("origin")?, a.usize("destination")?);
    let (path, cost) = match shortest_path(&g, o, d) {
        Ok(r) => r,
        Err(GraphError::NoPath { .. }) => {
            return Err(ComputeError::Missing { key: "route".into(), detail: json!({"origin": o, "destination": d}) })
        }
        Err(e) => return Err(e.into()),
    };
    match op {
        "shortest_path" => Ok(json!({"path": path, "cost": cost})),
        "eta" => {
            let t = eta(&path, &g, a.f64("speed")?)?;
            Ok(json!({"path": path, "cost": cost, "eta": t}))
        }
        other => Err(ComputeError::invalid(format!("unknown navigation operation `{other}`"))),
    }
}
