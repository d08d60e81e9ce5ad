use std::ops::Deref;

use super::formula::{Comparison, Formula};
use super::signal::Signal;
use super::StlError;

/// One robustness value per requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessVector(Vec<f64>);

impl RobustnessVector {
    /// Returns `None` when the vector is empty or holds a non-finite entry.
    pub fn new(values: Vec<f64>) -> Option<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some(Self(values))
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index of the smallest component; the lowest index wins ties.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.0.iter().enumerate() {
            if *v < self.0[best] {
                best = i;
            }
        }
        best
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for RobustnessVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Robustness of `formula` at every grid index where all of its windows fit
/// inside the signal. Entry `k` belongs to time `start + k * step`.
pub fn robustness_trace(formula: &Formula, signal: &Signal) -> Result<Vec<f64>, StlError> {
    match formula {
        Formula::Predicate {
            channel,
            comparison,
            threshold,
        } => {
            let values = signal
                .channel(channel)
                .ok_or_else(|| StlError::UnknownChannel(channel.clone()))?;
            Ok(match comparison {
                Comparison::Less => values.iter().map(|v| threshold - v).collect(),
                Comparison::Greater => values.iter().map(|v| v - threshold).collect(),
            })
        }
        Formula::Not(f) => Ok(robustness_trace(f, signal)?.into_iter().map(|v| -v).collect()),
        Formula::And(a, b) => binary(a, b, signal, f64::min),
        Formula::Or(a, b) => binary(a, b, signal, f64::max),
        Formula::Implies(a, b) => binary(a, b, signal, |x, y| (-x).max(y)),
        Formula::Globally(i, f) => window(i.lo(), i.hi(), f, signal, f64::min, f64::INFINITY),
        Formula::Eventually(i, f) => window(i.lo(), i.hi(), f, signal, f64::max, f64::NEG_INFINITY),
    }
}

fn binary(
    a: &Formula,
    b: &Formula,
    signal: &Signal,
    op: impl Fn(f64, f64) -> f64,
) -> Result<Vec<f64>, StlError> {
    let ra = robustness_trace(a, signal)?;
    let rb = robustness_trace(b, signal)?;
    Ok(ra.iter().zip(&rb).map(|(x, y)| op(*x, *y)).collect())
}

fn window(
    a: f64,
    b: f64,
    f: &Formula,
    signal: &Signal,
    op: fn(f64, f64) -> f64,
    identity: f64,
) -> Result<Vec<f64>, StlError> {
    let (lo, hi) = signal.window_offsets(a, b);
    if lo > hi {
        return Err(StlError::EmptyWindow(a, b));
    }
    let inner = robustness_trace(f, signal)?;
    let n = inner.len().saturating_sub(hi);
    Ok((0..n)
        .map(|k| inner[k + lo..=k + hi].iter().copied().fold(identity, op))
        .collect())
}

/// Quantitative robustness of `formula` on `signal` at grid time `t0`.
///
/// Temporal windows are evaluated over the grid samples they contain; the
/// formula holds at `t0` iff the result is `>= 0`.
pub fn robustness(formula: &Formula, signal: &Signal, t0: f64) -> Result<f64, StlError> {
    let k = signal.index_of(t0).ok_or(StlError::OffGrid(t0))?;
    let trace = robustness_trace(formula, signal)?;
    trace.get(k).copied().ok_or_else(|| StlError::WindowExceedsSignal {
        t0,
        lo: t0,
        hi: t0 + formula.horizon(),
        start: signal.start(),
        end: signal.end(),
    })
}
