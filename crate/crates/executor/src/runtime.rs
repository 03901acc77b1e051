use std::sync::Arc;

use star_agents::{execute_agent, fuse, head_classify, AgentEnv, AgentResult, QueryProfile};
use star_core::{AgentId, Blackboard, Taxonomy};

/// The agent pool as seen by the executor. Implementations must be pure
/// functions of their inputs so that scatter order cannot matter.
pub trait AgentRuntime: Sync {
    fn classify(&self, query: &str) -> QueryProfile;
    fn execute(&self, a: AgentId, bb: &Blackboard, query: &str) -> AgentResult;
    fn fuse(&self, bb: &Blackboard, query: &str, profile: &QueryProfile) -> String;
}

/// The deterministic specialists backed by an extractor.
#[derive(Clone, Debug)]
pub struct StarAgents {
    pub env: AgentEnv,
    pub taxonomy: Arc<Taxonomy>,
}

impl StarAgents {
    pub fn new(env: AgentEnv, taxonomy: Arc<Taxonomy>) -> Self {
        StarAgents { env, taxonomy }
    }
}

impl AgentRuntime for StarAgents {
    fn classify(&self, query: &str) -> QueryProfile {
        head_classify(query, self.env.extractor.as_ref(), &self.taxonomy)
    }

    fn execute(&self, a: AgentId, bb: &Blackboard, query: &str) -> AgentResult {
        execute_agent(a, bb, query, &self.env)
    }

    fn fuse(&self, bb: &Blackboard, query: &str, profile: &QueryProfile) -> String {
        fuse(bb, query, profile, self.env.extractor.as_ref())
    }
}
