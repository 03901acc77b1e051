//! Adapter to a hosted chat model over HTTP.
//!
//! Configured from `STAR_REMOTE_BASE_URL`, `STAR_REMOTE_API_KEY` and
//! `STAR_REMOTE_MODEL`. Speaks the common chat-completions shape and expects
//! fenced `<JSON>` records in replies.

use serde_json::{json, Value};

use star_core::{AgentId, Blackboard, Taxonomy};

use super::Extractor;
use crate::error::ExtractError;
use crate::menu::ComputationMenu;
use crate::selection::{parse_fenced, MenuSelection};

/// Prompt assets, versioned by directory.
pub const PROMPT_VERSION: &str = "v1";
const CLASSIFY: &str = include_str!("../../prompts/v1/classify.txt");
const SELECT: &str = include_str!("../../prompts/v1/select.txt");
const ANSWER: &str = include_str!("../../prompts/v1/answer.txt");

pub struct RemoteExtractor {
    client: reqwest::blocking::Client,
    base_url: String,
    api_key: String,
    model: String,
    catalog: String,
}

impl RemoteExtractor {
    pub fn from_env(taxonomy: &Taxonomy) -> Result<Self, ExtractError> {
        let var = |k: &str| std::env::var(k).map_err(|_| ExtractError::Transport(format!("{k} is not set")));
        Ok(RemoteExtractor {
            client: reqwest::blocking::Client::new(),
            base_url: var("STAR_REMOTE_BASE_URL")?,
            api_key: var("STAR_REMOTE_API_KEY")?,
            model: var("STAR_REMOTE_MODEL")?,
            catalog: taxonomy.names().join(", "),
        })
    }

    fn chat(&self, system: &str, user: &str) -> Result<String, ExtractError> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "system", "content": system}, {"role": "user", "content": user}],
        });
        let url = format!("{}/chat/completions", self.base_url.trim_end_matches('/'));
        let resp: Value = self
            .client
            .post(url)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.json())
            .map_err(|e| ExtractError::Transport(e.to_string()))?;
        resp.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| ExtractError::Malformed("reply has no message content".into()))
    }
}

fn board_text(bb: &Blackboard) -> String {
    bb.entries()
        .iter()
        .map(|e| format!("{} = {}", e.key, e.payload))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Extractor for RemoteExtractor {
    fn classify(&self, query: &str) -> Result<Value, ExtractError> {
        parse_fenced(&self.chat(&CLASSIFY.replace("{catalog}", &self.catalog), query)?)
    }

    fn select(
        &self,
        agent: AgentId,
        query: &str,
        bb: &Blackboard,
        menu: &ComputationMenu,
    ) -> Result<Option<MenuSelection>, ExtractError> {
        let system = SELECT
            .replace("{agent}", agent.name())
            .replace("{operations}", &menu.names().join(", "))
            .replace("{blackboard}", &board_text(bb));
        MenuSelection::from_value(parse_fenced(&self.chat(&system, query)?)?)
    }

    fn answer(&self, query: &str, bb: &Blackboard) -> Result<String, ExtractError> {
        self.chat(&ANSWER.replace("{blackboard}", &board_text(bb)), query)
    }
}
