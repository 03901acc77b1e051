use serde_json::{json, Value};

use star_toolkit::temporal::{allen_relation_by_name, classify_allen, forecast, interval_set, Series, SetOp};

use super::Args;
use crate::error::ComputeError;

pub fn run(op: &str, a: &Args) -> Result<Value, ComputeError> {
    if let Some(rel) = op.strip_prefix("allen_") {
        let x = a.interval("interval_a")?;
        let y = a.interval("interval_b")?;
        let holds = allen_relation_by_name(rel, &x, &y)?;
        return Ok(json!({
            "allen_relation": rel,
            "holds": holds,
            "classified": classify_allen(&x, &y).name(),
        }));
    }
    match op {
        "forecast" => {
            let values: Vec<f64> = a.get("series")?;
            let mut s = Series::new(values);
            if let Some(p) = a.opt_usize("period")? {
                s = s.with_period(p);
            }
            Ok(json!({"forecast": forecast(&s, a.usize("horizon")?)?}))
        }
        "interval_set" => {
            let op: SetOp = a.get::<String>("op")?.parse()?;
            let out = interval_set(op, &a.intervals("set_a")?, &a.intervals("set_b")?);
            let pairs: Vec<[f64; 2]> = out.iter().map(|i| [i.start(), i.end()]).collect();
            Ok(json!({"op": op, "result": pairs}))
        }
        other => Err(ComputeError::invalid(format!("unknown temporal operation `{other}`"))),
    }
}
