//! Running one configured experiment and summarizing it.

use serde::Serialize;
use teamdyn_core::{
    appraisal_consensus_spread, comparative_graph, feedback_signal, integrate, mismatch_h1,
    nontransitive_triad_count, omega_invariant_bound, performance, theorem4_bounds, InitialState,
    MetricHook, ReducedState, Sample, SampleContext, TerminalStatus, Trajectory,
};

use crate::config::{AssignmentRuleConfig, ExperimentConfig, InfluenceRuleConfig, ModelKindConfig};
use crate::error::{HarnessError, Result};
use crate::generate::{rng_for, uniform_simplex, Instance, STREAM_BASELINE};
use crate::hypotheses::{check_hypotheses, HypothesisReport};
use crate::metrics::MetricName;

pub const BOX_TOL: f64 = 1e-9;
pub const INVARIANT_TOL: f64 = 1e-9;
pub const KL_STEP_TOL: f64 = 1e-10;
pub const RATIO_STEP_TOL: f64 = 1e-8;

/// Worst excess of a trajectory over one bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub violated: bool,
    /// Largest amount by which the bound was exceeded; negative when it
    /// held with room to spare.
    pub worst_excess: f64,
    pub tolerance: f64,
}

impl BoundCheck {
    fn from_excess(excess: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let worst = excess.into_iter().fold(f64::NEG_INFINITY, f64::max);
        BoundCheck {
            violated: worst > tolerance,
            worst_excess: worst,
            tolerance,
        }
    }
}

/// Bound checks over the recorded samples. A field is `None` where the
/// bound does not apply to the model.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundReport {
    /// `ξ0 ≤ w_i(t) ≤ 1 - (n-1) ξ0` for eigenvector assignment under
    /// DeGroot influence.
    pub xi0_box: Option<BoundCheck>,
    /// `a_ii(t) ≤ 1 - ζ_i` under assign/appraise.
    pub invariant_set: Option<BoundCheck>,
    /// Increase of the KL Lyapunov function between samples.
    pub lyapunov_kl_increase: Option<BoundCheck>,
    /// Increase of the log-ratio Lyapunov function between samples.
    pub lyapunov_ratio_increase: Option<BoundCheck>,
    pub positivity_lost: bool,
}

impl BoundReport {
    pub fn any_violated(&self) -> bool {
        self.positivity_lost
            || [
                &self.xi0_box,
                &self.invariant_set,
                &self.lyapunov_kl_increase,
                &self.lyapunov_ratio_increase,
            ]
            .into_iter()
            .flatten()
            .any(|b| b.violated)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub name: String,
    pub seed: u64,
    pub n: usize,
    pub model: &'static str,
    pub status: &'static str,
    pub t_final: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub terminal_h1: f64,
    pub consensus_spread: Option<f64>,
    pub triad_count: Option<usize>,
    pub min_entry: Option<f64>,
    pub skills: Vec<f64>,
    pub final_assignment: Vec<f64>,
    pub max_row_sum_drift: f64,
    pub renorm_violations: usize,
    pub clamp_events: usize,
    pub bounds: BoundReport,
    pub hypotheses: HypothesisReport,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: ExperimentConfig,
    pub instance: Instance,
    pub metrics: Vec<MetricName>,
    pub trajectory: Trajectory,
    pub summary: Summary,
}

/// Builds the instance and validates its hypotheses without integrating.
pub fn check(cfg: &ExperimentConfig) -> Result<(Instance, HypothesisReport)> {
    let inst = Instance::build(cfg)?;
    let report = check_hypotheses(cfg, &inst)?;
    Ok((inst, report))
}

/// Runs `cfg` in memory.
pub fn simulate(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let (inst, hypotheses) = check(cfg)?;
    let metrics = cfg.metric_names();
    let hooks: Vec<&dyn MetricHook<f64>> =
        metrics.iter().map(|m| m as &dyn MetricHook<f64>).collect();
    let icfg = cfg.integrator.build()?;
    let trajectory = match cfg.model.kind {
        ModelKindConfig::RandomBaseline => random_baseline(cfg, &inst, &hooks)?,
        ModelKindConfig::Manager => {
            let w0 = inst.w0.clone().expect("manager instances carry w(0)");
            integrate(
                &inst.spec,
                &inst.x,
                &InitialState::Assignment(w0),
                &icfg,
                &hooks,
            )?
        }
        _ => {
            let a0 = inst.a0.clone().expect("appraisal instances carry A(0)");
            integrate(
                &inst.spec,
                &inst.x,
                &InitialState::Appraisal(a0),
                &icfg,
                &hooks,
            )?
        }
    };
    let bounds = check_bounds(cfg, &inst, &trajectory)?;
    let summary = summarize(cfg, &inst, &trajectory, bounds, hypotheses);
    Ok(RunOutcome {
        config: cfg.clone(),
        instance: inst,
        metrics,
        trajectory,
        summary,
    })
}

/// Sample times `0, Δ, 2Δ, ...` up to and including `t_end`.
fn sample_grid(sample_every: f64, t_end: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * sample_every;
        if t > t_end * (1.0 - 1e-12) {
            break;
        }
        ts.push(t);
        k += 1;
    }
    ts.push(t_end);
    ts
}

/// Appraisals frozen at `A(0)`; the assignment is redrawn uniformly from
/// the simplex at every sample.
fn random_baseline(
    cfg: &ExperimentConfig,
    inst: &Instance,
    hooks: &[&dyn MetricHook<f64>],
) -> Result<Trajectory> {
    let a = inst
        .a0
        .as_ref()
        .expect("baseline instances carry A(0)")
        .matrix();
    let mut rng = rng_for(cfg.seed, STREAM_BASELINE);
    let grid = sample_grid(cfg.integrator.sample_every, cfg.integrator.t_end);
    let mut samples = Vec::with_capacity(grid.len());
    for t in grid {
        let w = uniform_simplex(&mut rng, cfg.n);
        let p = performance(&inst.x, &w, &inst.spec.f)?;
        let phi = feedback_signal(&p, &inst.m)?;
        let ctx = SampleContext {
            t,
            x: &inst.x,
            w: &w,
            appraisal: Some(a),
            p: &p,
            phi: &phi,
        };
        let metrics = hooks.iter().map(|h| h.eval(&ctx)).collect();
        samples.push(Sample {
            t,
            appraisal: Some(a.clone()),
            w,
            p,
            phi,
            metrics,
        });
    }
    Ok(Trajectory {
        steps: samples.len(),
        samples,
        metric_names: hooks.iter().map(|h| h.name().to_string()).collect(),
        status: TerminalStatus::TEndReached,
        rejected_steps: 0,
        max_row_sum_drift: 0.0,
        renorm_violations: 0,
        clamp_events: 0,
        min_entry: a.min_entry(),
        final_rate_norm: 0.0,
    })
}

fn increases(values: &[f64]) -> impl Iterator<Item = f64> + '_ {
    values
        .windows(2)
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .map(|p| p[1] - p[0])
}

fn check_bounds(cfg: &ExperimentConfig, inst: &Instance, tr: &Trajectory) -> Result<BoundReport> {
    let mut report = BoundReport {
        positivity_lost: tr.status == TerminalStatus::PositivityLost,
        ..Default::default()
    };
    let n = cfg.n;
    let eigen = cfg.model.assignment_rule == AssignmentRuleConfig::Eigenvector;
    match cfg.model.kind {
        ModelKindConfig::Manager => {
            let kl: Vec<f64> = tr
                .samples
                .iter()
                .map(|s| MetricName::LyapunovKl.eval(&ctx_of(s, inst)))
                .collect();
            let ratio: Vec<f64> = tr
                .samples
                .iter()
                .map(|s| MetricName::LyapunovRatio.eval(&ctx_of(s, inst)))
                .collect();
            report.lyapunov_kl_increase =
                Some(BoundCheck::from_excess(increases(&kl), KL_STEP_TOL));
            report.lyapunov_ratio_increase =
                Some(BoundCheck::from_excess(increases(&ratio), RATIO_STEP_TOL));
        }
        ModelKindConfig::AssignAppraise if eigen => {
            let a0 = inst.a0.as_ref().expect("appraisal instances carry A(0)");
            if let Ok(reduced) = ReducedState::from_appraisal(a0) {
                let zeta = omega_invariant_bound(&reduced.a, &reduced.c, &inst.x)?;
                let excess = tr.samples.iter().flat_map(|s| {
                    let a = s.appraisal.as_ref().expect("appraisal samples");
                    (0..n)
                        .map(|i| a[(i, i)] - (1.0 - zeta[i]))
                        .collect::<Vec<_>>()
                });
                report.invariant_set = Some(BoundCheck::from_excess(excess, INVARIANT_TOL));
            }
        }
        ModelKindConfig::AssignAppraiseInfluence
            if eigen && cfg.model.influence_rule == InfluenceRuleConfig::Degroot =>
        {
            if let Some(w0) = &inst.w0 {
                let (_, xi0) = theorem4_bounds(&inst.x, w0)?;
                let hi = 1.0 - (n as f64 - 1.0) * xi0;
                let excess = tr
                    .samples
                    .iter()
                    .flat_map(|s| s.w.iter().map(|&w| (xi0 - w).max(w - hi)));
                report.xi0_box = Some(BoundCheck::from_excess(excess, BOX_TOL));
            }
            let ratio: Vec<f64> = tr
                .samples
                .iter()
                .map(|s| MetricName::LyapunovRatio.eval(&ctx_of(s, inst)))
                .collect();
            report.lyapunov_ratio_increase =
                Some(BoundCheck::from_excess(increases(&ratio), RATIO_STEP_TOL));
        }
        _ => {}
    }
    Ok(report)
}

fn ctx_of<'a>(s: &'a Sample, inst: &'a Instance) -> SampleContext<'a, f64> {
    SampleContext {
        t: s.t,
        x: &inst.x,
        w: &s.w,
        appraisal: s.appraisal.as_ref(),
        p: &s.p,
        phi: &s.phi,
    }
}

fn summarize(
    cfg: &ExperimentConfig,
    inst: &Instance,
    tr: &Trajectory,
    bounds: BoundReport,
    hypotheses: HypothesisReport,
) -> Summary {
    let last = tr.last();
    let a = last.appraisal.as_ref();
    Summary {
        name: cfg.display_name(),
        seed: cfg.seed,
        n: cfg.n,
        model: cfg.model.kind.as_str(),
        status: tr.status.as_str(),
        t_final: last.t,
        steps: tr.steps,
        rejected_steps: tr.rejected_steps,
        terminal_h1: mismatch_h1(&inst.x, &last.w),
        consensus_spread: a.map(appraisal_consensus_spread),
        triad_count: a.and_then(|a| nontransitive_triad_count(&comparative_graph(a)).ok()),
        min_entry: a.map(|_| tr.min_entry),
        skills: inst.x.as_slice().to_vec(),
        final_assignment: last.w.clone(),
        max_row_sum_drift: tr.max_row_sum_drift,
        renorm_violations: tr.renorm_violations,
        clamp_events: tr.clamp_events,
        bounds,
        hypotheses,
    }
}

impl RunOutcome {
    /// Error out when the run ended without a usable terminal state.
    pub fn require_success(&self) -> Result<()> {
        match self.trajectory.status {
            TerminalStatus::Converged | TerminalStatus::TEndReached => Ok(()),
            s => Err(HarnessError::Run(format!(
                "{} ended with status {}",
                self.summary.name,
                s.as_str()
            ))),
        }
    }
}
