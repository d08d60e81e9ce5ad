use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::write_runs_file;
use super::{summarize, write_config_json, write_summary_json, BenchError, SummaryStats};
use crate::search::{run_seeded, Algorithm, RunRecord, SearchConfig};
use crate::suts::{Sut, SutRegistry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub sut: String,
    pub replications: usize,
    /// Replication `r` runs with seed `seed + r`.
    pub seed: u64,
    pub search: SearchConfig,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Mab,
            sut: "mo3d".into(),
            replications: 50,
            seed: 0,
            search: SearchConfig::default(),
            jobs: 1,
            out: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub summary: SummaryStats,
    pub records: Vec<RunRecord>,
}

/// Runs `replications` independent searches against `sut`, ordered by
/// replication index.
pub fn run_replications(
    sut: &dyn Sut,
    algorithm: Algorithm,
    search: &SearchConfig,
    replications: usize,
    seed: u64,
    jobs: usize,
) -> Result<Vec<RunRecord>, BenchError> {
    let run = |r: usize| {
        run_seeded(algorithm, sut, search, seed.wrapping_add(r as u64))
            .map_err(|source| BenchError::Search {
                replication: r,
                source,
            })
    };
    if jobs <= 1 {
        return (0..replications).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    pool.install(|| (0..replications).into_par_iter().map(run).collect())
}

/// Runs the experiment and, when `cfg.out` is set, writes `runs.csv`,
/// `summary.json` and `config.json` there.
pub fn run_experiment(cfg: &ExperimentConfig, registry: &SutRegistry) -> Result<Experiment, BenchError> {
    if cfg.replications == 0 {
        return Err(BenchError::Config("at least one replication is required".into()));
    }
    let sut = registry.create(&cfg.sut)?;
    let records = run_replications(
        sut.as_ref(),
        cfg.algorithm,
        &cfg.search,
        cfg.replications,
        cfg.seed,
        cfg.jobs,
    )?;
    let summary = summarize(&records)?;
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).map_err(|source| BenchError::Io {
            path: dir.clone(),
            source,
        })?;
        write_runs_file(&records, &dir.join("runs.csv"))?;
        write_summary_json(&summary, &dir.join("summary.json"))?;
        write_config_json(cfg, &dir.join("config.json"))?;
    }
    Ok(Experiment { summary, records })
}
