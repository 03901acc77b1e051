use std::collections::BTreeMap;

use crate::scalar::Real;
use crate::vocab::AgentId;

/// Probability map over the agent pool, stored densely in pool order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distribution<S> {
    mass: [S; AgentId::COUNT],
}

impl<S: Real> Distribution<S> {
    pub fn zeros() -> Self {
        Distribution {
            mass: [S::zero(); AgentId::COUNT],
        }
    }

    pub fn delta(a: AgentId) -> Self {
        let mut d = Self::zeros();
        d.mass[a.index()] = S::one();
        d
    }

    pub fn uniform(agents: &[AgentId]) -> Self {
        let mut d = Self::zeros();
        if agents.is_empty() {
            return d;
        }
        let p = S::one() / S::from_usize_lossy(agents.len());
        for a in agents {
            d.mass[a.index()] = p;
        }
        d
    }

    pub fn from_row(row: &[S]) -> Self {
        let mut d = Self::zeros();
        d.mass.copy_from_slice(&row[..AgentId::COUNT]);
        d
    }

    pub fn get(&self, a: AgentId) -> S {
        self.mass[a.index()]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.mass
    }

    pub fn total(&self) -> S {
        self.mass.iter().copied().sum()
    }

    /// Agents with positive mass, in pool order.
    pub fn support(&self) -> impl Iterator<Item = (AgentId, S)> + '_ {
        AgentId::ALL
            .iter()
            .zip(self.mass.iter())
            .filter(|(_, p)| **p > S::zero())
            .map(|(a, p)| (*a, *p))
    }

    /// Highest-mass agent; ties go to the earlier agent in pool order.
    pub fn argmax(&self) -> Option<AgentId> {
        let mut best: Option<(AgentId, S)> = None;
        for (a, p) in self.support() {
            match best {
                Some((_, bp)) if p <= bp => {}
                _ => best = Some((a, p)),
            }
        }
        best.map(|(a, _)| a)
    }

    pub fn to_map(&self) -> BTreeMap<AgentId, S> {
        self.support().collect()
    }
}
