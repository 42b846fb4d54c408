//! Monte Carlo estimate of how often appraisals stay bounded away from zero.

use rayon::prelude::*;
use serde::Serialize;
use teamdyn_core::TerminalStatus;

use crate::config::{AppraisalGen, ExperimentConfig, ModelKindConfig};
use crate::error::{HarnessError, Result};
use crate::generate::sub_seed;
use crate::run::simulate;

/// Smallest `N` with `N ≥ ln(2/ξ) / (2ε²)`: with that many independent
/// samples the empirical frequency is within `ε` of the true probability
/// with confidence `1 - ξ`.
pub fn chernoff_min_samples(epsilon: f64, xi: f64) -> Result<u64> {
    for (name, v) in [("epsilon", epsilon), ("xi", xi)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(HarnessError::Config(format!(
                "{name} must lie in (0, 1), got {v}"
            )));
        }
    }
    let bound = (2.0 / xi).ln() / (2.0 * epsilon * epsilon);
    let mut n = bound.ceil();
    // guard against the ceiling landing one short through rounding
    while n < bound {
        n += 1.0;
    }
    Ok(n as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloOptions {
    pub runs: usize,
    pub horizon: f64,
    /// A run succeeds when `min A(t) ≥ a_min_probe · min A(0)` throughout.
    pub a_min_probe: f64,
    pub epsilon: f64,
    pub xi: f64,
    /// Refuse to run with fewer samples than the Chernoff bound asks for.
    pub certified: bool,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        MonteCarloOptions {
            runs: 1000,
            horizon: 100.0,
            a_min_probe: 1e-3,
            epsilon: 0.01,
            xi: 0.01,
            certified: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub index: usize,
    pub seed: u64,
    pub status: String,
    pub initial_min_entry: f64,
    pub min_entry: f64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    #[serde(rename = "N")]
    pub n_runs: usize,
    pub successes: usize,
    /// `successes / N`; `None` when `N = 0`.
    pub p_hat: Option<f64>,
    pub epsilon: f64,
    pub xi: f64,
    #[serde(rename = "chernoff_N_min")]
    pub chernoff_n_min: u64,
    pub certified: bool,
    pub horizon: f64,
    pub a_min_probe: f64,
    pub master_seed: u64,
    pub runs: Vec<RunRecord>,
}

fn one_run(base: &ExperimentConfig, opts: &MonteCarloOptions, index: usize) -> RunRecord {
    let seed = sub_seed(base.seed, index as u64);
    let mut cfg = base.clone();
    cfg.seed = seed;
    cfg.integrator.t_end = opts.horizon;
    cfg.integrator.sample_every = opts.horizon;
    cfg.outputs = vec![crate::metrics::MetricName::MinEntry];
    match simulate(&cfg) {
        Ok(out) => {
            let initial = out
                .instance
                .a0
                .as_ref()
                .map_or(f64::NAN, |a| a.matrix().min_entry());
            let status = out.trajectory.status;
            let min_entry = out.trajectory.min_entry;
            let ok_status = matches!(
                status,
                TerminalStatus::Converged | TerminalStatus::TEndReached
            );
            RunRecord {
                index,
                seed,
                status: status.as_str().to_string(),
                initial_min_entry: initial,
                min_entry,
                success: ok_status && min_entry >= opts.a_min_probe * initial,
            }
        }
        Err(e) => RunRecord {
            index,
            seed,
            status: format!("error: {e}"),
            initial_min_entry: f64::NAN,
            min_entry: f64::NAN,
            success: false,
        },
    }
}

/// Runs `opts.runs` independent replicates of `cfg`, each with its own
/// sub-seed, and reports how many kept every appraisal above the probe.
pub fn montecarlo_positivity(
    cfg: &ExperimentConfig,
    opts: &MonteCarloOptions,
) -> Result<MonteCarloReport> {
    if cfg.model.kind != ModelKindConfig::AssignAppraiseInfluence {
        return Err(HarnessError::Config(
            "Monte Carlo positivity needs the assign_appraise_influence model".into(),
        ));
    }
    match &cfg.initial_appraisal {
        AppraisalGen::DirichletRows { .. } | AppraisalGen::ConsensusOnSkills => {}
        AppraisalGen::Explicit { rows } if rows.iter().flatten().all(|&v| v > 0.0) => {}
        _ => {
            return Err(HarnessError::Config(
                "Monte Carlo positivity needs an entrywise positive A(0) generator".into(),
            ))
        }
    }
    if !(opts.horizon > cfg.integrator.h) {
        return Err(HarnessError::Config(format!(
            "horizon {} must exceed the step {}",
            opts.horizon, cfg.integrator.h
        )));
    }
    if !(opts.a_min_probe > 0.0 && opts.a_min_probe <= 1.0) {
        return Err(HarnessError::Config(format!(
            "a_min_probe must lie in (0, 1], got {}",
            opts.a_min_probe
        )));
    }
    let chernoff_n_min = chernoff_min_samples(opts.epsilon, opts.xi)?;
    if opts.certified && (opts.runs as u64) < chernoff_n_min {
        return Err(HarnessError::Config(format!(
            "certified run needs N >= {chernoff_n_min} for epsilon = {}, xi = {}, got {}",
            opts.epsilon, opts.xi, opts.runs
        )));
    }
    let runs: Vec<RunRecord> = (0..opts.runs)
        .into_par_iter()
        .map(|k| one_run(cfg, opts, k))
        .collect();
    let successes = runs.iter().filter(|r| r.success).count();
    Ok(MonteCarloReport {
        n_runs: opts.runs,
        successes,
        p_hat: (opts.runs > 0).then(|| successes as f64 / opts.runs as f64),
        epsilon: opts.epsilon,
        xi: opts.xi,
        chernoff_n_min,
        certified: opts.certified,
        horizon: opts.horizon,
        a_min_probe: opts.a_min_probe,
        master_seed: cfg.seed,
        runs,
    })
}
