//! Replicated falsification experiments and their result files.

mod experiment;
mod output;
mod summary;

pub use experiment::{run_experiment, run_replications, Experiment, ExperimentConfig};
pub use output::{format_float, write_config_json, write_runs_csv, write_summary_json};
pub use summary::{summarize, SummaryStats};

use std::path::PathBuf;

use thiserror::Error;

use crate::search::SearchError;
use crate::suts::SutError;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Sut(#[from] SutError),
    #[error("replication {replication} failed: {source}")]
    Search {
        replication: usize,
        #[source]
        source: SearchError,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no run records to summarize")]
    Empty,
}
