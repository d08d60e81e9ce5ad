use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use falsify_core::bench::{run_experiment, ExperimentConfig};
use falsify_core::search::{Algorithm, BudgetConfig, SearchConfig};
use falsify_core::suts::SutRegistry;

/// Replicated online-GAN falsification experiments.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// single, multi or mab
    #[arg(long, default_value = "mab")]
    algorithm: Algorithm,
    /// System under test: mo3d or at-surrogate
    #[arg(long, default_value = "mo3d")]
    sut: String,
    /// Executions per replication
    #[arg(long, default_value_t = 80)]
    budget: usize,
    #[arg(long, default_value_t = 0.25)]
    lhs_fraction: f64,
    /// Target increment of the escalation loop
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Share of the budget with all surrogates consulted (mab only)
    #[arg(long, default_value_t = 0.5)]
    warmup_fraction: f64,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    /// Master seed; replication r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for runs.csv, summary.json and config.json
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Discriminator epochs per step
    #[arg(long)]
    disc_epochs: Option<usize>,
    /// Quantile of positive warm-up robustness used as the surrogate scale
    #[arg(long)]
    scale_quantile: Option<f64>,
    /// Generator epochs per step
    #[arg(long)]
    gen_epochs: Option<usize>,
    /// Latent samples per generator update
    #[arg(long)]
    gen_batch: Option<usize>,
    /// Adam learning rate for both networks
    #[arg(long)]
    learning_rate: Option<f64>,
}

impl Args {
    fn config(&self) -> ExperimentConfig {
        let mut search = SearchConfig {
            budget: BudgetConfig {
                budget: self.budget,
                lhs_fraction: self.lhs_fraction,
                delta: self.delta,
                warmup_fraction: self.warmup_fraction,
            },
            ..Default::default()
        };
        let o = &mut search.ogan;
        if let Some(q) = self.scale_quantile {
            o.scale_quantile = q;
        }
        if let Some(e) = self.disc_epochs {
            o.discriminator_training.epochs = e;
        }
        if let Some(e) = self.gen_epochs {
            o.generator_training.epochs = e;
        }
        if let Some(b) = self.gen_batch {
            o.generator_batch = b;
        }
        if let Some(lr) = self.learning_rate {
            o.discriminator_training.learning_rate = lr;
            o.generator_training.learning_rate = lr;
        }
        ExperimentConfig {
            algorithm: self.algorithm,
            sut: self.sut.clone(),
            replications: self.reps,
            seed: self.seed,
            search,
            jobs: self.jobs,
            out: Some(self.out.clone()),
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = args.config();
    match run_experiment(&cfg, &SutRegistry::with_builtins()) {
        Ok(exp) => {
            let s = &exp.summary;
            println!(
                "{} on {}: {}/{} falsified ({:.0}%), median min {:.3}, mean min {:.3}, sd {}",
                cfg.algorithm,
                cfg.sut,
                s.falsified,
                s.replications,
                100.0 * s.falsification_rate,
                s.median_minimum,
                s.mean_minimum,
                s.sd_minimum.map_or("n/a".to_string(), |v| format!("{v:.3}")),
            );
            if s.falsified > 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
