//! Experiment harness for the team assignment and appraisal models.
//!
//! Configs are TOML files describing how to draw skills, appraisals and
//! observation networks from a seed, which model to run, and which theorem
//! hypotheses the instance is meant to satisfy or violate. [`run::simulate`]
//! runs one config in memory; [`artifacts::run_experiment`] also writes
//! CSV, JSON and heatmap outputs. [`montecarlo`] estimates how often
//! appraisals stay positive, and [`cli`] exposes everything as the
//! `teamdyn` binary.

pub mod artifacts;
pub mod cli;
pub mod config;
pub mod error;
pub mod generate;
pub mod hypotheses;
pub mod metrics;
pub mod montecarlo;
pub mod run;
pub mod scenarios;
pub mod sweep;

pub use artifacts::{run_experiment, write_artifacts};
pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use hypotheses::Hypothesis;
pub use metrics::MetricName;
pub use montecarlo::{
    chernoff_min_samples, montecarlo_positivity, MonteCarloOptions, MonteCarloReport,
};
pub use run::{check, simulate, RunOutcome, Summary};
pub use scenarios::scenario;
