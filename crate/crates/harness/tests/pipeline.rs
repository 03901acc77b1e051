use star_core::routing::{support, TrainingConfig};
use star_core::{write_traces_jsonl, AgentId, ExecStatus, TaskType};
use star_executor::InferenceConfig;
use star_harness::simulate::synthetic_queries;
use star_harness::{
    run_training_pipeline, simulate_recovery, AgentBehavior, Outcome, PipelineConfig, ScriptedBehavior, ScriptedRuntime,
};

use AgentId::*;
use ExecStatus::*;

const T: &str = "SIM";

fn behavior(rules: Vec<AgentBehavior>, fusion_accuracy: f64) -> ScriptedBehavior {
    ScriptedBehavior::new(3, vec![T.into()], rules, fusion_accuracy)
        .unwrap()
        .with_route(T, vec![Head, Spatial, Fusion])
        .unwrap()
}

fn always(a: AgentId, s: ExecStatus, accuracy: f64) -> AgentBehavior {
    AgentBehavior::new(a, vec![Outcome::new(s, 1.0, accuracy)])
}

fn train(b: &ScriptedBehavior, n: usize, cfg: &PipelineConfig) -> star_harness::PipelineOutput<f64> {
    let data = synthetic_queries(b, n, 1);
    let rt = ScriptedRuntime::new(b.clone(), &data);
    run_training_pipeline(&data, &rt, &b.bootstrap_kernel().unwrap(), cfg).unwrap()
}

fn row(out: &star_harness::PipelineOutput<f64>, a: AgentId, s: ExecStatus) -> Vec<(AgentId, f64)> {
    let slot = out.matrix.taxonomy().slot(&TaskType::new(T)).unwrap();
    out.matrix
        .row(a, s, slot)
        .map(|r| r.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(i, p)| (AgentId::from_index(i).unwrap(), *p)).collect())
        .unwrap_or_default()
}

#[test]
fn always_miss_then_correct_fusion_learns_fusion() {
    let b = behavior(vec![always(Spatial, Miss, 0.0)], 1.0);
    let out = train(&b, 50, &PipelineConfig::default());
    assert_eq!(row(&out, Spatial, Miss), vec![(Fusion, 1.0)]);
    assert!(out.traces.iter().all(|t| t.correct));
    assert!(out.traces.iter().all(|t| t.augmented.iter().all(|a| !a.recovered)));
}

#[test]
fn success_only_training_leaves_failed_rows_empty() {
    let b = behavior(vec![always(Spatial, Miss, 0.0)], 0.0);
    let cfg = PipelineConfig {
        training: TrainingConfig::new(0.0).unwrap().with_augmentation(false),
        ..Default::default()
    };
    let out = train(&b, 50, &cfg);
    assert!(row(&out, Spatial, Miss).is_empty());
    let with_alpha = train(&b, 50, &PipelineConfig { training: TrainingConfig::new(0.3).unwrap().with_augmentation(false), ..Default::default() });
    assert_eq!(row(&with_alpha, Spatial, Miss), vec![(Fusion, 1.0)]);
}

#[test]
fn augmentation_widens_support_when_recoveries_succeed() {
    let rules = vec![
        always(Spatial, Miss, 0.0),
        AgentBehavior::new(Temporal, vec![Outcome::new(Succ, 1.0, 1.0)]),
    ];
    let b = behavior(rules, 0.0);
    let off = PipelineConfig { training: TrainingConfig::default().with_augmentation(false), ..Default::default() };
    let without = train(&b, 40, &off);
    let with = train(&b, 40, &PipelineConfig::default());
    let t = TaskType::new(T);
    let s_off = support(&without.matrix, Spatial, Miss, &t);
    let s_on = support(&with.matrix, Spatial, Miss, &t);
    assert!(s_off.is_subset(&s_on) && s_on.len() > s_off.len());
    assert!(s_on.contains(&Temporal));
}

#[test]
fn pipeline_is_byte_reproducible() {
    let b: ScriptedBehavior = serde_json::from_str(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/recovery_behaviors.json")).unwrap(),
    )
    .unwrap();
    let render = || {
        let data = synthetic_queries(&b, 200, 9);
        let rt = ScriptedRuntime::new(b.clone(), &data);
        let out = run_training_pipeline(&data, &rt, &b.bootstrap_kernel().unwrap(), &PipelineConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_traces_jsonl(&mut buf, &out.traces).unwrap();
        buf
    };
    assert_eq!(render(), render());
}

#[test]
fn empty_dataset_is_rejected() {
    let b = behavior(vec![], 0.0);
    let rt = ScriptedRuntime::new(b.clone(), &[]);
    assert!(run_training_pipeline(&[], &rt, &b.bootstrap_kernel().unwrap(), &PipelineConfig::default()).is_err());
}

#[test]
fn zero_failure_behaviors_give_only_the_baseline_row() {
    let b = behavior(vec![always(Spatial, Succ, 0.8)], 0.0);
    let k = b.bootstrap_kernel().unwrap();
    let bd = simulate_recovery(&b, &k, 300, 5, &InferenceConfig::default());
    assert_eq!(bd.rows.len(), 1);
    assert_eq!(bd.rows[0].first_error, None);
    assert_eq!(bd.rows[0].n, 300);
}

#[test]
fn all_fail_with_empty_rows_matches_fusion_only() {
    let fail = behavior(vec![always(Spatial, Fail, 0.0)], 0.3);
    let k = fail.bootstrap_kernel().unwrap();
    let bd = simulate_recovery(&fail, &k, 500, 5, &InferenceConfig::default());
    assert_eq!(bd.rows.len(), 1);
    assert_eq!(bd.rows[0].first_error, Some(Fail));

    // same queries and seeds, but HEAD hands straight to FUSION
    let mut direct = fail.clone();
    direct.routes = vec![(T.into(), vec![Head, Fusion])];
    let kd = direct.bootstrap_kernel().unwrap();
    let base = simulate_recovery(&direct, &kd, 500, 5, &InferenceConfig::default());
    assert_eq!(base.rows[0].first_error, None);
    assert_eq!(bd.rows[0].correct, base.rows[0].correct);
}

#[test]
fn simulation_is_deterministic_and_partitions() {
    let b = behavior(
        vec![AgentBehavior::new(Spatial, vec![Outcome::new(Succ, 0.5, 0.7), Outcome::new(Miss, 0.3, 0.0), Outcome::new(Block, 0.2, 0.0)])],
        0.2,
    );
    let k = b.bootstrap_kernel().unwrap();
    let x = simulate_recovery(&b, &k, 400, 2, &InferenceConfig::default());
    assert_eq!(x, simulate_recovery(&b, &k, 400, 2, &InferenceConfig::default()));
    assert_eq!(x.rows.iter().map(|r| r.n).sum::<usize>(), x.total);
}

#[test]
fn invalid_behaviors_are_rejected() {
    let bad = AgentBehavior::new(Spatial, vec![Outcome::new(Succ, 0.5, 1.0)]);
    assert!(ScriptedBehavior::new(0, vec![T.into()], vec![bad], 0.0).is_err());
    let head = AgentBehavior::new(Head, vec![Outcome::new(Succ, 1.0, 1.0)]);
    assert!(ScriptedBehavior::new(0, vec![T.into()], vec![head], 0.0).is_err());
    assert!(ScriptedBehavior::new(0, vec![], vec![], 0.0).is_err());
}
