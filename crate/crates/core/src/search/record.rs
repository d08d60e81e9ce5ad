use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Algorithm, Test};

/// Where an executed test came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Lhs,
    /// Proposed by the surrogate with this index.
    Gan(usize),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Lhs => f.write_str("lhs"),
            Source::Gan(i) => write!(f, "gan{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Falsified,
    BudgetExhausted,
    /// The system under test failed; the record is partial.
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionRow {
    pub test: Test,
    /// Raw robustness of every requirement.
    pub robustness: Vec<f64>,
    pub source: Source,
    /// Escalation target at which the candidate was accepted.
    pub target: Option<f64>,
    /// Escalation iterations needed to accept the candidate.
    pub escalations: Option<usize>,
}

impl ExecutionRow {
    pub fn min_robustness(&self) -> f64 {
        self.robustness.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Full trace of one falsification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub seed: Option<u64>,
    pub budget: usize,
    pub lhs_executions: usize,
    /// Executions (LHS included) during which every surrogate is consulted.
    pub warmup_executions: usize,
    pub rows: Vec<ExecutionRow>,
    pub termination: Termination,
    /// Per-requirement count of executions where it had the smallest component.
    pub winners: Vec<u64>,
}

impl RunRecord {
    pub fn falsified(&self) -> bool {
        self.termination == Termination::Falsified
    }

    /// Smallest robustness component over all executions.
    pub fn observed_minimum(&self) -> f64 {
        self.rows
            .iter()
            .map(ExecutionRow::min_robustness)
            .fold(f64::INFINITY, f64::min)
    }

    /// Running minimum of the smallest component after each execution.
    pub fn running_minimum(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.rows
            .iter()
            .map(|r| {
                best = best.min(r.min_robustness());
                best
            })
            .collect()
    }

    /// One-based index of the first falsifying execution.
    pub fn executions_to_falsification(&self) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| r.min_robustness() <= 0.0)
            .map(|i| i + 1)
    }

    pub fn max_escalations(&self) -> usize {
        self.rows.iter().filter_map(|r| r.escalations).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run record serializes")
    }
}
