use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::search::RunRecord;

/// Aggregate statistics over replications of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub replications: usize,
    pub falsified: usize,
    pub falsification_rate: f64,
    /// Per-replication minimum over executions of the smallest component.
    pub observed_minima: Vec<f64>,
    pub median_minimum: f64,
    pub mean_minimum: f64,
    /// Sample standard deviation; `None` for a single replication.
    pub sd_minimum: Option<f64>,
    /// One-based execution index of the first falsification, per replication.
    pub executions_to_falsification: Vec<Option<usize>>,
    /// Mean running minimum after each execution index `1..=budget`; runs that
    /// stopped early carry their final value forward.
    pub evolution: Vec<f64>,
    /// Largest number of target escalations needed by any accepted candidate.
    pub max_escalations: usize,
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize(records: &[RunRecord]) -> Result<SummaryStats, BenchError> {
    if records.is_empty() {
        return Err(BenchError::Empty);
    }
    if records.iter().any(|r| r.rows.is_empty()) {
        return Err(BenchError::Config("a replication executed no tests".into()));
    }
    let n = records.len();
    let budget = records.iter().map(|r| r.budget).max().unwrap_or(0);
    let minima: Vec<f64> = records.iter().map(RunRecord::observed_minimum).collect();
    let falsified = records.iter().filter(|r| r.falsified()).count();
    let mean = minima.iter().sum::<f64>() / n as f64;
    let sd = (n > 1).then(|| {
        let ss: f64 = minima.iter().map(|m| (m - mean) * (m - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    });
    let curves: Vec<Vec<f64>> = records.iter().map(RunRecord::running_minimum).collect();
    let evolution = (0..budget)
        .map(|k| {
            curves
                .iter()
                .map(|c| c[k.min(c.len() - 1)])
                .sum::<f64>()
                / n as f64
        })
        .collect();
    Ok(SummaryStats {
        replications: n,
        falsified,
        falsification_rate: falsified as f64 / n as f64,
        median_minimum: median(&minima),
        mean_minimum: mean,
        sd_minimum: sd,
        observed_minima: minima,
        executions_to_falsification: records
            .iter()
            .map(RunRecord::executions_to_falsification)
            .collect(),
        evolution,
        max_escalations: records.iter().map(RunRecord::max_escalations).max().unwrap_or(0),
    })
}
