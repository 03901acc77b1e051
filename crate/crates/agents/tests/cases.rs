mod common;

use serde_json::json;

use star_agents::extractor::replay::Role;
use star_agents::{execute_agent, fuse, head_classify, AgentEnv, QueryProfile, ScriptedExtractor};
use star_core::{AgentId, Blackboard, ExecStatus, Taxonomy};

use common::*;

const CASE_A: &str = "stbench_basic_direction_determination_2261";
const CASE_B: &str = "stark_Linestring_Polygon_within-during_27";
const CASE_C: &str = "stbench_basic_administrative_region_determination_3977";
const CASE_D: &str = "stark_direction_questions_37";
const CASE_E: &str = "st_bench_new_5305";
const COMPOSITE_1: &str = "composite_insurance_claim";
const COMPOSITE_2: &str = "composite_weather_monitoring";

fn board_with_profile(query: &str, env: &AgentEnv) -> (Blackboard, QueryProfile) {
    let tax = Taxonomy::benchmark_default();
    let profile = head_classify(query, env.extractor.as_ref(), &tax);
    let mut bb = Blackboard::new();
    bb.deposit(AgentId::Head, "query_profile", profile.to_payload());
    (bb, profile)
}

fn merge(bb: &mut Blackboard, r: &star_agents::AgentResult) {
    for e in &r.deposits {
        bb.deposit(e.producer, e.key.clone(), e.payload.clone());
    }
}

#[test]
fn case_a_direction_is_north() {
    let env = env_with(replay());
    let q = query(CASE_A);
    let (bb, profile) = board_with_profile(&q, &env);
    assert_eq!(profile.task_type().as_str(), "STBENCH_DIRECTION_DETERMINATION");
    let r = execute_agent(AgentId::Spatial, &bb, &q, &env);
    assert_eq!(r.status, ExecStatus::Succ);
    let p = &r.deposits[0].payload;
    assert_eq!(r.deposits[0].key, "spatial_data");
    assert_eq!(p["direction_result"], json!(1));
    let bearing = p["bearing_deg"].as_f64().unwrap();
    assert!((bearing - 21.39).abs() < 0.05, "bearing {bearing}");
}

#[test]
fn case_b_spatial_then_temporal_reads_event_interval() {
    let rep = replay();
    let env = env_with(rep.clone());
    let q = query(CASE_B);
    let (mut bb, profile) = board_with_profile(&q, &env);

    // TEMPORAL first: its interval comes from SPATIAL, which has not run
    let early = execute_agent(AgentId::Temporal, &bb, &q, &env);
    assert_eq!(early.status, ExecStatus::Block);
    assert_eq!(early.deposits[0].payload["missing"], json!("spatial_data.event_interval"));

    let sp = execute_agent(AgentId::Spatial, &bb, &q, &env);
    assert_eq!(sp.status, ExecStatus::Succ);
    let ev = sp.deposits[0].payload["event_interval"].as_array().unwrap().clone();
    assert!((ev[0].as_f64().unwrap() - 1.577).abs() < 1e-3);
    assert!((ev[1].as_f64().unwrap() - 10.761).abs() < 1e-3);
    merge(&mut bb, &sp);

    let tp = execute_agent(AgentId::Temporal, &bb, &q, &env);
    assert_eq!(tp.status, ExecStatus::Succ);
    assert_eq!(tp.deposits[0].payload["holds"], json!(false));
    merge(&mut bb, &tp);

    assert_eq!(fuse(&bb, &q, &profile, rep.as_ref()), "[RESULTS_START] [0.0] [RESULTS_END]");
    assert_eq!(rep.calls(Role::Answer), 0);
}

#[test]
fn case_c_geocoded_region_is_option_four() {
    let rep = replay();
    let env = env_with(rep.clone());
    let q = query(CASE_C);
    let (mut bb, profile) = board_with_profile(&q, &env);
    let r = execute_agent(AgentId::Spatial, &bb, &q, &env);
    assert_eq!(r.status, ExecStatus::Succ);
    let p = &r.deposits[0].payload;
    assert_eq!(p["geocoded_name"], json!("East Lansdowne, Delaware County, Pennsylvania, USA"));
    assert_eq!(p["matched_option"], json!(4));
    assert!(p["match_score"].as_f64().unwrap() >= 0.85);
    merge(&mut bb, &r);
    assert_eq!(fuse(&bb, &q, &profile, rep.as_ref()), "4");
}

#[test]
fn case_c_without_geocoder_is_miss() {
    let env = AgentEnv::new(replay());
    let q = query(CASE_C);
    let (bb, _) = board_with_profile(&q, &env);
    let r = execute_agent(AgentId::Spatial, &bb, &q, &env);
    assert_eq!(r.status, ExecStatus::Miss);
    assert_eq!(r.deposits[0].payload["missing"], json!("geocoder"));
}

#[test]
fn case_d_unresolved_landmarks_miss_then_fusion_falls_back() {
    let rep = replay();
    let env = env_with(rep.clone());
    let q = query(CASE_D);
    let (mut bb, profile) = board_with_profile(&q, &env);
    assert_eq!(profile.task_type().as_str(), "STARK_LANDMARK_DIRECTION");
    let r = execute_agent(AgentId::Spatial, &bb, &q, &env);
    assert_eq!(r.status, ExecStatus::Miss);
    let p = &r.deposits[0].payload;
    assert_eq!(p["missing"], json!("landmark_coordinates"));
    assert_eq!(p["status"], json!("MISS"));
    merge(&mut bb, &r);
    assert_eq!(fuse(&bb, &q, &profile, rep.as_ref()), "[RESULTS_START] [1.0] [RESULTS_END]");
    assert_eq!(rep.calls(Role::Answer), 1);
}

#[test]
fn case_e_topology_answers_without_model_fallback() {
    let rep = replay();
    let env = env_with(rep.clone());
    let q = query(CASE_E);
    let (mut bb, profile) = board_with_profile(&q, &env);
    let r = execute_agent(AgentId::Topological, &bb, &q, &env);
    assert_eq!(r.status, ExecStatus::Succ);
    let p = &r.deposits[0].payload;
    assert_eq!(p["matching_options"], json!(["C"]));
    assert!(p["tool_confidence"].as_f64().unwrap() >= 0.5);
    merge(&mut bb, &r);
    assert_eq!(fuse(&bb, &q, &profile, rep.as_ref()), "<answer>C</answer>");
    assert_eq!(rep.calls(Role::Answer), 0);
}

fn run_composite(id: &str) -> String {
    let rep = replay();
    let env = env_with(rep.clone());
    let q = query(id);
    let (mut bb, profile) = board_with_profile(&q, &env);
    assert!(profile.is_composite());
    assert_eq!(profile.sub_types(), &[AgentId::Spatial, AgentId::Temporal]);
    for a in profile.sub_types().to_vec() {
        let r = execute_agent(a, &bb, &q, &env);
        assert_eq!(r.status, ExecStatus::Succ, "{a}");
        merge(&mut bb, &r);
    }
    fuse(&bb, &q, &profile, rep.as_ref())
}

#[test]
fn composite_insurance_claim_both_parts_hold() {
    assert_eq!(run_composite(COMPOSITE_1), r#"{"part1":1,"part2":1}"#);
}

#[test]
fn composite_weather_monitoring_reproduces_overlap_miss() {
    // [1,3] and [1,2.5] share a start, so Allen calls it started-by, not overlaps
    assert_eq!(run_composite(COMPOSITE_2), r#"{"part1":1,"part2":0}"#);
}

#[test]
fn scripted_extractor_agrees_with_replay_on_case_a_and_c() {
    let env = AgentEnv::new(std::sync::Arc::new(ScriptedExtractor)).with_geocoder(geocoder());
    for (id, key, want) in [(CASE_A, "direction_result", json!(1)), (CASE_C, "matched_option", json!(4))] {
        let q = query(id);
        let (bb, _) = board_with_profile(&q, &env);
        let r = execute_agent(AgentId::Spatial, &bb, &q, &env);
        assert_eq!(r.status, ExecStatus::Succ, "{id}");
        assert_eq!(r.deposits[0].payload[key], want, "{id}");
    }
}

#[test]
fn scripted_composite_classification() {
    let tax = Taxonomy::benchmark_default();
    let p = head_classify(&query(COMPOSITE_1), &ScriptedExtractor, &tax);
    assert_eq!(p.sub_types(), &[AgentId::Spatial, AgentId::Temporal]);
    assert!(head_classify("   ", &ScriptedExtractor, &tax).task_type().is_open());
}
