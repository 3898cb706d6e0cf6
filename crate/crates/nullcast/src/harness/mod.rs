//! Configuration ingestion, seeded Monte Carlo execution, metric
//! aggregation and CSV emission.

pub mod config;
pub mod experiments;

pub use config::{Experiment, ExperimentConfig};
pub use experiments::{
    aggregate_roc, compute_experiment, run_experiment, AggregateRow, ExperimentOutput,
    TrialRecord,
};
