//! Deterministic tool calls behind each menu entry.

mod args;
mod navigation;
mod spatial;
mod temporal;
mod topological;

use serde_json::{Map, Value};

use star_core::{AgentId, Blackboard};

use crate::error::ComputeError;
use crate::execute::AgentEnv;
use crate::trajectory::{trajectory_ops, TrajectoryOp, DEFAULT_ANOMALY_FACTOR, DEFAULT_PREDICT_WINDOW};

pub use args::Args;

/// What a tool may consult besides its parameters.
pub struct ComputeCtx<'a> {
    pub bb: &'a Blackboard,
    pub env: &'a AgentEnv,
    /// Extractor's grounding report, used by tools that can ground
    /// parameters themselves.
    pub resolved: bool,
}

/// Operations that handle an unresolved selection themselves instead of
/// going straight to MISS.
pub fn self_grounding(op: &str) -> bool {
    op == "landmark_direction"
}

/// Runs `op` for `agent`. The returned record is deposited as-is.
pub fn run(agent: AgentId, op: &str, params: &Map<String, Value>, ctx: &ComputeCtx) -> Result<Value, ComputeError> {
    let a = Args::new(params);
    match agent {
        AgentId::Spatial => spatial::run(op, &a, ctx),
        AgentId::Temporal => temporal::run(op, &a),
        AgentId::Trajectory => {
            let traj = a.trajectory("points", "timestamps")?;
            let top = match op {
                "anomaly" => TrajectoryOp::Anomaly { factor: a.opt_f64("factor")?.unwrap_or(DEFAULT_ANOMALY_FACTOR) },
                "predict" => TrajectoryOp::Predict {
                    horizon: a.usize("horizon")?,
                    k: a.opt_usize("k")?.unwrap_or(DEFAULT_PREDICT_WINDOW),
                },
                "region_classify" => TrajectoryOp::RegionClassify { region: a.geometry("region", Some("polygon"), traj.points()[0].frame)? },
                other => return Err(ComputeError::invalid(format!("unknown trajectory operation `{other}`"))),
            };
            Ok(trajectory_ops(&top, &traj)?)
        }
        AgentId::Topological => topological::run(op, &a),
        AgentId::Navigation => navigation::run(op, &a),
        AgentId::Head | AgentId::Semantic | AgentId::Fusion => {
            Err(ComputeError::invalid(format!("{agent} has no computation menu")))
        }
    }
}
