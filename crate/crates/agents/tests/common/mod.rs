#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::sync::Arc;

use serde_json::Value;

use star_agents::{AgentEnv, Geocoder, ReplayExtractor};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn replay() -> Arc<ReplayExtractor> {
    let f = File::open(fixture("replay.jsonl")).expect("replay fixture");
    Arc::new(ReplayExtractor::from_jsonl(BufReader::new(f)).expect("valid replay fixture"))
}

pub fn geocoder() -> Geocoder {
    Geocoder::parse(&std::fs::read_to_string(fixture("geocoder.txt")).unwrap()).unwrap()
}

pub fn env_with(r: Arc<ReplayExtractor>) -> AgentEnv {
    AgentEnv::new(r).with_geocoder(geocoder())
}

/// Query text of the named case.
pub fn query(id: &str) -> String {
    let text = std::fs::read_to_string(fixture("cases.jsonl")).unwrap();
    text.lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|v| v["id"] == id)
        .and_then(|v| v["query"].as_str().map(str::to_string))
        .unwrap_or_else(|| panic!("no case {id}"))
}
