//! The extractor contract: classification, menu selection and free-form
//! answering. Everything non-deterministic lives behind this trait.

pub mod replay;
pub mod scripted;
#[cfg(feature = "remote")]
pub mod remote;

use serde_json::Value;

use star_core::{AgentId, Blackboard};

use crate::error::ExtractError;
use crate::menu::ComputationMenu;
use crate::selection::MenuSelection;

pub trait Extractor: Send + Sync {
    /// HEAD profile record: `task_type` or `sub_types`, plus `constraints`
    /// and `benchmark`.
    fn classify(&self, query: &str) -> Result<Value, ExtractError>;

    /// Picks an operation from `menu`. `Ok(None)` means no entry applies.
    fn select(
        &self,
        agent: AgentId,
        query: &str,
        bb: &Blackboard,
        menu: &ComputationMenu,
    ) -> Result<Option<MenuSelection>, ExtractError>;

    /// World-knowledge answer used by SEMANTIC and the FUSION fallback.
    fn answer(&self, query: &str, bb: &Blackboard) -> Result<String, ExtractError>;
}

impl<E: Extractor + ?Sized> Extractor for std::sync::Arc<E> {
    fn classify(&self, query: &str) -> Result<Value, ExtractError> {
        (**self).classify(query)
    }

    fn select(
        &self,
        agent: AgentId,
        query: &str,
        bb: &Blackboard,
        menu: &ComputationMenu,
    ) -> Result<Option<MenuSelection>, ExtractError> {
        (**self).select(agent, query, bb, menu)
    }

    fn answer(&self, query: &str, bb: &Blackboard) -> Result<String, ExtractError> {
        (**self).answer(query, bb)
    }
}
