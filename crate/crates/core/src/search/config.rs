use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::ogan::OganConfig;

/// Which online GAN loop to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// One surrogate for the minimum over all requirements.
    Single,
    /// One surrogate per requirement, all trained every step.
    Multi,
    /// One surrogate per requirement, one chosen per step by win frequency.
    Mab,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Single, Algorithm::Multi, Algorithm::Mab];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Single => "single",
            Algorithm::Multi => "multi",
            Algorithm::Mab => "mab",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "single" => Ok(Algorithm::Single),
            "multi" => Ok(Algorithm::Multi),
            "mab" => Ok(Algorithm::Mab),
            other => Err(format!("unknown algorithm `{other}` (expected single, multi or mab)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetConfig {
    /// Total number of executions on the system under test.
    pub budget: usize,
    /// Share of the budget spent on Latin hypercube sampling.
    pub lhs_fraction: f64,
    /// Target increment of the escalation loop, in normalized units.
    pub delta: f64,
    /// Share of the budget (LHS included) during which the bandit variant
    /// consults every surrogate.
    pub warmup_fraction: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            budget: 80,
            lhs_fraction: 0.25,
            delta: 0.05,
            warmup_fraction: 0.5,
        }
    }
}

fn fraction_of(budget: usize, fraction: f64) -> usize {
    (budget as f64 * fraction + 1e-9).floor() as usize
}

impl BudgetConfig {
    pub fn lhs_count(&self) -> usize {
        fraction_of(self.budget, self.lhs_fraction)
    }

    pub fn warmup_count(&self) -> usize {
        fraction_of(self.budget, self.warmup_fraction)
    }

    /// Upper bound on escalation iterations: `ceil(1 / delta) + 1`.
    pub fn max_escalations(&self) -> usize {
        (1.0 / self.delta).ceil() as usize + 1
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::Config(m.to_string()));
        if self.budget == 0 {
            return bad("budget must be positive");
        }
        if !(self.lhs_fraction > 0.0 && self.lhs_fraction < 1.0) {
            return bad("lhs fraction must lie in (0, 1)");
        }
        if self.lhs_count() < 1 {
            return bad("budget * lhs fraction must be at least 1");
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad("delta must lie in (0, 1]");
        }
        if !(self.warmup_fraction >= 0.0 && self.warmup_fraction < 1.0) {
            return bad("warm-up fraction must lie in [0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: BudgetConfig,
    pub ogan: OganConfig,
}
