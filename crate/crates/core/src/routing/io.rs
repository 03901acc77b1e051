//! JSON matrix files.
//!
//! A file carries the taxonomy, the nominal routes, training metadata and
//! every non-empty, non-FUSION row of the recovery matrix. Omitted rows load
//! as empty; FUSION rows are structural and rebuilt on load.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::MatrixParseError;
use crate::routing::config::{Ablation, StatusMode};
use crate::routing::kernel::{KernelMeta, RoutingKernel};
use crate::routing::matrix::RecoveryMatrix;
use crate::routing::nominal::NominalRouteTable;
use crate::scalar::Real;
use crate::vocab::{AgentId, ExecStatus, TaskType, Taxonomy};

pub const FORMAT_NAME: &str = "star-recovery-matrix";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    format: String,
    version: u32,
    pool: Vec<AgentId>,
    statuses: Vec<ExecStatus>,
    status_mode: StatusModeTag,
    taxonomy: Vec<String>,
    allow_open: bool,
    alpha: f64,
    augmentation: bool,
    ablation: Ablation,
    nominal: BTreeMap<String, Vec<AgentId>>,
    rows: Vec<RowRecord>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum StatusModeTag {
    Typed,
    Merged,
}

#[derive(Serialize, Deserialize)]
struct RowRecord {
    from: AgentId,
    status: ExecStatus,
    #[serde(rename = "type")]
    task_type: String,
    to: BTreeMap<AgentId, f64>,
}

/// Serializes the kernel to pretty-printed JSON bytes.
pub fn save_matrix<S: Real>(kernel: &RoutingKernel<S>) -> Vec<u8> {
    let m = kernel.recovery();
    let tax = kernel.taxonomy();
    let rows = m
        .filled_rows()
        .filter(|(a, ..)| *a != AgentId::Fusion)
        .map(|(from, status, slot, row)| RowRecord {
            from,
            status,
            task_type: tax.slot_name(slot).to_string(),
            to: AgentId::ALL
                .into_iter()
                .filter(|b| row[b.index()] > S::zero())
                .map(|b| (b, row[b.index()].as_f64()))
                .collect(),
        })
        .collect();
    let meta = kernel.meta();
    let file = MatrixFile {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        pool: AgentId::ALL.to_vec(),
        statuses: ExecStatus::ALL.to_vec(),
        status_mode: match m.status_mode() {
            StatusMode::Typed => StatusModeTag::Typed,
            StatusMode::Merged => StatusModeTag::Merged,
        },
        taxonomy: tax.names().to_vec(),
        allow_open: tax.allows_open(),
        alpha: meta.alpha,
        augmentation: meta.augmentation,
        ablation: meta.ablation,
        nominal: kernel
            .nominal()
            .iter()
            .map(|(t, p)| (t.to_string(), p.to_vec()))
            .collect(),
        rows,
    };
    serde_json::to_vec_pretty(&file).expect("matrix file serializes")
}

/// Parses bytes produced by [`save_matrix`]. Nothing is returned unless the
/// whole file is valid.
pub fn load_matrix<S: Real>(bytes: &[u8]) -> Result<RoutingKernel<S>, MatrixParseError> {
    let file: MatrixFile = serde_json::from_slice(bytes).map_err(|e| MatrixParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let content = |msg: String| MatrixParseError::Content(msg);
    if file.format != FORMAT_NAME {
        return Err(content(format!("unexpected format {:?}", file.format)));
    }
    if file.version != FORMAT_VERSION {
        return Err(content(format!("unsupported version {}", file.version)));
    }
    if file.pool != AgentId::ALL {
        return Err(content("agent pool differs from this build".into()));
    }
    if file.statuses != ExecStatus::ALL {
        return Err(content("status vocabulary differs from this build".into()));
    }
    let mut taxonomy = Taxonomy::new(file.taxonomy).map_err(|e| content(e.to_string()))?;
    if !file.allow_open {
        taxonomy = taxonomy.strict();
    }
    let taxonomy = Arc::new(taxonomy);
    let mode = match file.status_mode {
        StatusModeTag::Typed => StatusMode::Typed,
        StatusModeTag::Merged => StatusMode::Merged,
    };
    if !(0.0..=1.0).contains(&file.alpha) {
        return Err(content(format!("alpha {} outside [0, 1]", file.alpha)));
    }

    let mut nominal = NominalRouteTable::new();
    for (t, path) in file.nominal {
        nominal.insert(t, path).map_err(|e| content(e.to_string()))?;
    }

    let mut recovery = RecoveryMatrix::<S>::empty(taxonomy.clone(), mode);
    for (i, rec) in file.rows.iter().enumerate() {
        let slot = if rec.task_type == TaskType::OPEN_NAME {
            taxonomy.open_slot()
        } else {
            let t = TaskType::new(rec.task_type.clone());
            if !taxonomy.contains(&t) {
                return Err(content(format!("row {i}: unknown task type {}", rec.task_type)));
            }
            taxonomy.slot(&t).map_err(|e| content(e.to_string()))?
        };
        if rec.from == AgentId::Fusion {
            return Err(content(format!("row {i}: FUSION rows are structural")));
        }
        if mode == StatusMode::Merged && rec.status != ExecStatus::ALL[0] {
            return Err(content(format!("row {i}: merged matrices use status INIT only")));
        }
        let mut row = [S::zero(); AgentId::COUNT];
        let mut sum = 0.0;
        for (b, p) in &rec.to {
            if !p.is_finite() || *p < 0.0 {
                return Err(content(format!("row {i}: invalid probability {p}")));
            }
            row[b.index()] = S::lit(*p);
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(content(format!("row {i}: probabilities sum to {sum}")));
        }
        if recovery.row(rec.from, rec.status, slot).is_some() {
            return Err(content(format!("row {i}: duplicate row")));
        }
        recovery.set_row(rec.from, rec.status, slot, &row);
    }

    let meta = KernelMeta {
        alpha: file.alpha,
        augmentation: file.augmentation,
        ablation: file.ablation,
    };
    Ok(RoutingKernel::new(nominal, recovery, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::config::TrainingConfig;
    use crate::trace::ExecutionTrace;
    use AgentId::*;
    use ExecStatus::*;

    fn kernel() -> RoutingKernel<f64> {
        let traces = vec![
            ExecutionTrace::new("1", "STARK_LANDMARK_DIRECTION".into())
                .with_steps([(Head, Succ), (Spatial, Miss), (Fusion, Succ)])
                .with_correct(true),
            ExecutionTrace::new("2", "STARK_LANDMARK_DIRECTION".into())
                .with_steps([(Head, Succ), (Spatial, Miss), (Temporal, Succ), (Fusion, Succ)])
                .with_correct(false),
            ExecutionTrace::new("3", "MYSTERY".into())
                .with_steps([(Head, Succ), (Semantic, Fail), (Fusion, Succ)])
                .with_correct(true),
        ];
        RoutingKernel::train(
            &traces,
            &TrainingConfig::default(),
            NominalRouteTable::benchmark_default(),
            Arc::new(Taxonomy::benchmark_default()),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let k = kernel();
        let bytes = save_matrix(&k);
        let back: RoutingKernel<f64> = load_matrix(&bytes).unwrap();
        assert_eq!(back, k);
        assert_eq!(save_matrix(&back), bytes);
    }

    #[test]
    fn truncated_file_reports_position() {
        let bytes = save_matrix(&kernel());
        let err = load_matrix::<f64>(&bytes[..bytes.len() / 2]).unwrap_err();
        match err {
            MatrixParseError::Syntax { line, .. } => assert!(line > 1),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn bad_content_rejected() {
        let text = String::from_utf8(save_matrix(&kernel())).unwrap();
        let broken = text.replacen("\"version\": 1", "\"version\": 9", 1);
        assert!(matches!(
            load_matrix::<f64>(broken.as_bytes()),
            Err(MatrixParseError::Content(_))
        ));
    }
}
