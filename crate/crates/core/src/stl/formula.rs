use std::fmt;

use super::StlError;

/// Comparison operator of an atomic predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Greater,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Less => "<",
            Comparison::Greater => ">",
        }
    }
}

/// Closed time window `[lo, hi]` of a temporal operator, relative to the
/// evaluation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, StlError> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
            return Err(StlError::BadInterval(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// STL abstract syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Predicate {
        channel: String,
        comparison: Comparison,
        threshold: f64,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Globally(Interval, Box<Formula>),
    Eventually(Interval, Box<Formula>),
}

impl Formula {
    pub fn predicate(channel: impl Into<String>, comparison: Comparison, threshold: f64) -> Self {
        Formula::Predicate {
            channel: channel.into(),
            comparison,
            threshold,
        }
    }

    pub fn less(channel: impl Into<String>, threshold: f64) -> Self {
        Self::predicate(channel, Comparison::Less, threshold)
    }

    pub fn greater(channel: impl Into<String>, threshold: f64) -> Self {
        Self::predicate(channel, Comparison::Greater, threshold)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn globally(lo: f64, hi: f64, f: Formula) -> Result<Self, StlError> {
        Ok(Formula::Globally(Interval::new(lo, hi)?, Box::new(f)))
    }

    pub fn eventually(lo: f64, hi: f64, f: Formula) -> Result<Self, StlError> {
        Ok(Formula::Eventually(Interval::new(lo, hi)?, Box::new(f)))
    }

    /// Largest time offset past the evaluation time that the formula reads.
    pub fn horizon(&self) -> f64 {
        match self {
            Formula::Predicate { .. } => 0.0,
            Formula::Not(f) => f.horizon(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.horizon().max(b.horizon())
            }
            Formula::Globally(i, f) | Formula::Eventually(i, f) => i.hi() + f.horizon(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Predicate { .. } => 0,
            Formula::Not(f) | Formula::Globally(_, f) | Formula::Eventually(_, f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Channel names referenced by predicates, in first-occurrence order.
    pub fn channels(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_channels(&mut out);
        out
    }

    fn collect_channels<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Predicate { channel, .. } => {
                if !out.contains(&channel.as_str()) {
                    out.push(channel);
                }
            }
            Formula::Not(f) | Formula::Globally(_, f) | Formula::Eventually(_, f) => {
                f.collect_channels(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_channels(out);
                b.collect_channels(out);
            }
        }
    }
}

// Printed fully parenthesized so that the output parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Predicate {
                channel,
                comparison,
                threshold,
            } => write!(f, "({} {} {:?})", channel, comparison.symbol(), threshold),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Globally(i, a) => write!(f, "(always[{:?},{:?}] {a})", i.lo, i.hi),
            Formula::Eventually(i, a) => write!(f, "(eventually[{:?},{:?}] {a})", i.lo, i.hi),
        }
    }
}
