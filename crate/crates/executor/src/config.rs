use serde::{Deserialize, Serialize};
use thiserror::Error;

use star_core::routing::Ablation;
use star_core::ExecStatus;

pub const DEFAULT_TAU: f64 = 0.4;
pub const DEFAULT_MAX_STEPS: usize = 10;
/// Pivot preference, most urgent first.
pub const DEFAULT_PRIORITY: [ExecStatus; 4] = [ExecStatus::Block, ExecStatus::Miss, ExecStatus::Fail, ExecStatus::Succ];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("tau must lie in (0, 1], got {0}")]
    Tau(f64),
    #[error("max_steps must be at least 2 (HEAD and FUSION), got {0}")]
    MaxSteps(usize),
    #[error("parallelism must be positive")]
    Parallelism,
    #[error("pivot priority must list BLOCK, MISS, FAIL and SUCC exactly once")]
    Priority,
}

/// Knobs of one inference run. `max_steps` bounds the whole trace, HEAD
/// and FUSION included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InferenceConfig {
    pub tau: f64,
    pub max_steps: usize,
    pub parallelism: usize,
    pub ablation: Ablation,
    /// Drives the successor draw under the RANDOM ablation.
    pub seed: u64,
    pub priority: [ExecStatus; 4],
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            tau: DEFAULT_TAU,
            max_steps: DEFAULT_MAX_STEPS,
            parallelism: std::thread::available_parallelism().map_or(4, |n| n.get()),
            ablation: Ablation::Full,
            seed: 0,
            priority: DEFAULT_PRIORITY,
        }
    }
}

impl InferenceConfig {
    pub fn new(tau: f64, max_steps: usize) -> Result<Self, ConfigError> {
        let cfg = InferenceConfig { tau, max_steps, ..Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_ablation(mut self, ablation: Ablation) -> Self {
        self.ablation = ablation;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_parallelism(mut self, n: usize) -> Self {
        self.parallelism = n;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(ConfigError::Tau(self.tau));
        }
        if self.max_steps < 2 {
            return Err(ConfigError::MaxSteps(self.max_steps));
        }
        if self.parallelism == 0 {
            return Err(ConfigError::Parallelism);
        }
        let mut seen = self.priority.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != 4 || self.priority.contains(&ExecStatus::Init) {
            return Err(ConfigError::Priority);
        }
        Ok(())
    }

    /// Position of `s` in the pivot order; INIT sorts after everything.
    pub fn rank(&self, s: ExecStatus) -> usize {
        self.priority.iter().position(|p| *p == s).unwrap_or(self.priority.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let c = InferenceConfig::default();
        assert_eq!((c.tau, c.max_steps), (0.4, 10));
        assert!(c.validate().is_ok());
        assert_eq!(InferenceConfig::new(0.0, 10), Err(ConfigError::Tau(0.0)));
        assert_eq!(InferenceConfig::new(1.5, 10), Err(ConfigError::Tau(1.5)));
        assert!(InferenceConfig::new(1.0, 2).is_ok());
        assert_eq!(InferenceConfig::new(0.4, 1), Err(ConfigError::MaxSteps(1)));
        let mut p = InferenceConfig::default();
        p.priority = [ExecStatus::Block; 4];
        assert_eq!(p.validate(), Err(ConfigError::Priority));
    }
}
