use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::RoutingError;
use crate::scalar::Real;

/// Router configuration switches, one per ablation row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Ablation {
    #[default]
    Full,
    /// Expert routes only; every error state goes to the safety net.
    System1Only,
    /// Learned matrix everywhere, including nominal states.
    System2Only,
    /// All statuses merged into one index at train and route time.
    NoStatus,
    /// Success-only training (alpha forced to zero).
    AlphaZero,
    /// Uniform over specialists and FUSION.
    Random,
}

impl Ablation {
    pub const ALL: [Ablation; 6] = [
        Ablation::Full,
        Ablation::System1Only,
        Ablation::System2Only,
        Ablation::NoStatus,
        Ablation::AlphaZero,
        Ablation::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ablation::Full => "FULL",
            Ablation::System1Only => "SYSTEM1_ONLY",
            Ablation::System2Only => "SYSTEM2_ONLY",
            Ablation::NoStatus => "NO_STATUS",
            Ablation::AlphaZero => "ALPHA_ZERO",
            Ablation::Random => "RANDOM",
        }
    }

    pub fn status_mode(self) -> StatusMode {
        match self {
            Ablation::NoStatus => StatusMode::Merged,
            _ => StatusMode::Typed,
        }
    }
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ablation {
    type Err = RoutingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Ablation::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| RoutingError::UnknownAblation(s.to_string()))
    }
}

/// How statuses index the tensor's second axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatusMode {
    /// One slot per status.
    Typed,
    /// A single slot shared by every status.
    Merged,
}

impl StatusMode {
    pub fn slots(self) -> usize {
        match self {
            StatusMode::Typed => crate::vocab::ExecStatus::COUNT,
            StatusMode::Merged => 1,
        }
    }

    pub fn slot(self, s: crate::vocab::ExecStatus) -> usize {
        match self {
            StatusMode::Typed => s.index(),
            StatusMode::Merged => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub alpha: f64,
    pub enable_augmentation: bool,
    pub ablation: Ablation,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            alpha: 0.3,
            enable_augmentation: true,
            ablation: Ablation::Full,
        }
    }
}

impl TrainingConfig {
    pub fn new(alpha: f64) -> Result<Self, RoutingError> {
        let cfg = TrainingConfig {
            alpha,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_ablation(mut self, ablation: Ablation) -> Self {
        self.ablation = ablation;
        self
    }

    pub fn with_augmentation(mut self, on: bool) -> Self {
        self.enable_augmentation = on;
        self
    }

    pub fn validate(&self) -> Result<(), RoutingError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(RoutingError::InvalidAlpha(self.alpha));
        }
        Ok(())
    }

    /// Alpha actually used for weighting; ALPHA_ZERO overrides the field.
    pub fn effective_alpha(&self) -> f64 {
        match self.ablation {
            Ablation::AlphaZero => 0.0,
            _ => self.alpha,
        }
    }

    pub fn status_mode(&self) -> StatusMode {
        self.ablation.status_mode()
    }
}

/// Trace weight `r + alpha * (1 - r)`: 1 for a correct trace, alpha otherwise.
pub fn trace_weight<S: Real>(correct: bool, alpha: S) -> S {
    let r = if correct { S::one() } else { S::zero() };
    r + alpha * (S::one() - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_formula() {
        assert_eq!(trace_weight(true, 0.3f64), 1.0);
        assert_eq!(trace_weight(false, 0.3f64), 0.3);
        assert_eq!(trace_weight(false, 0.0f64), 0.0);
        assert_eq!(trace_weight(true, 0.0f32), 1.0);
    }

    #[test]
    fn alpha_zero_overrides_field() {
        let cfg = TrainingConfig::default().with_ablation(Ablation::AlphaZero);
        assert_eq!(cfg.alpha, 0.3);
        assert_eq!(cfg.effective_alpha(), 0.0);
        assert_eq!(TrainingConfig::default().effective_alpha(), 0.3);
    }

    #[test]
    fn ablation_names_round_trip() {
        for a in Ablation::ALL {
            assert_eq!(a.name().parse::<Ablation>().unwrap(), a);
        }
        assert_eq!("no-status".parse::<Ablation>().unwrap(), Ablation::NoStatus);
        assert!("SYSTEM3".parse::<Ablation>().is_err());
    }

    #[test]
    fn alpha_range_checked() {
        assert!(TrainingConfig::new(1.2).is_err());
        assert!(TrainingConfig::new(-0.1).is_err());
        assert!(TrainingConfig::new(0.0).is_ok());
    }
}
