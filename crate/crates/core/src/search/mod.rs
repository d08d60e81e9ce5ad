//! Falsification search: Latin hypercube initialization, the single-surrogate,
//! multi-surrogate and bandit-driven online GAN loops, and their run records.

mod config;
mod engine;
mod lhs;
mod mab;
mod record;
mod test_point;

pub use config::{Algorithm, BudgetConfig, SearchConfig};
pub use engine::{falsify, falsify_mab, falsify_multi, falsify_single, run_seeded};
pub use lhs::latin_hypercube;
pub use mab::{mab_pick, MabState};
pub use record::{ExecutionRow, RunRecord, Source, Termination};
pub use test_point::{OutOfRange, Test};

use thiserror::Error;

use crate::ogan::OganError;
use crate::suts::SutError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("system under test failed after {} executions: {source}", partial.rows.len())]
    Sut {
        #[source]
        source: SutError,
        partial: Box<RunRecord>,
    },
    #[error(transparent)]
    Ogan(#[from] OganError),
    #[error("no candidate accepted within {0} target escalations")]
    EscalationOverflow(usize),
}
