//! Thin command-line front end for the experiment harness.
//!
//! `nullcast <experiment> --config cfg.toml [--seed S] [--trials T] [--out path.csv]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error. Set
//! NULLCAST_THREADS to cap the worker count.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nullcast::harness::{run_experiment, Experiment, ExperimentConfig};
use nullcast::Error;

#[derive(Parser, Debug)]
#[command(
    name = "nullcast",
    about = "Monte Carlo experiments for noise-subspace opportunistic signaling",
    disable_help_subcommand = true
)]
struct Cli {
    /// Experiment to run (see --list).
    experiment: Option<String>,
    /// TOML config file; omitted fields fall back to the reference scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial count override.
    #[arg(long)]
    trials: Option<usize>,
    /// Aggregate CSV destination override.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial CSV destination.
    #[arg(long)]
    raw_out: Option<PathBuf>,
    /// Enumerate the available experiments and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for e in Experiment::ALL {
            println!("{:<14} {}", e.name(), e.describe());
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(path) => {
            println!("wrote {path}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nullcast: {e}");
            match e {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> nullcast::Result<String> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    let name = cli
        .experiment
        .clone()
        .or_else(|| cfg.experiment.clone())
        .ok_or_else(|| {
            Error::ConfigInvalid("no experiment given (argument or config key)".into())
        })?;
    let experiment: Experiment = name.parse()?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.display().to_string();
    }
    if let Some(raw) = &cli.raw_out {
        cfg.raw_out = Some(raw.display().to_string());
    }
    run_experiment(experiment, &cfg)?;
    Ok(cfg.out.clone())
}
