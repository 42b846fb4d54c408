//! Named metrics recorded alongside a trajectory.

use serde::{Deserialize, Serialize};
use teamdyn_core::{
    appraisal_consensus_spread, comparative_graph, lyapunov_manager, lyapunov_ratio, mismatch_h1,
    nontransitive_triad_count, MetricHook, SampleContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    /// `Σ |w_i - x_i|`.
    H1,
    /// Largest entrywise gap between appraisal rows.
    Spread,
    /// Non-transitive triads of the comparative appraisal graph.
    Triads,
    /// Smallest appraisal entry.
    MinEntry,
    /// Kullback-Leibler divergence of `w` from `x`.
    LyapunovKl,
    /// `ln max(x_i/w_i) - ln min(x_i/w_i)`.
    LyapunovRatio,
}

impl MetricName {
    pub const ALL: [MetricName; 6] = [
        MetricName::H1,
        MetricName::Spread,
        MetricName::Triads,
        MetricName::MinEntry,
        MetricName::LyapunovKl,
        MetricName::LyapunovRatio,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::H1 => "h1",
            MetricName::Spread => "spread",
            MetricName::Triads => "triads",
            MetricName::MinEntry => "min_entry",
            MetricName::LyapunovKl => "lyapunov_kl",
            MetricName::LyapunovRatio => "lyapunov_ratio",
        }
    }

    pub fn needs_appraisal(self) -> bool {
        matches!(
            self,
            MetricName::Spread | MetricName::Triads | MetricName::MinEntry
        )
    }
}

impl MetricHook<f64> for MetricName {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn eval(&self, ctx: &SampleContext<'_, f64>) -> f64 {
        match self {
            MetricName::H1 => mismatch_h1(ctx.x, ctx.w),
            MetricName::Spread => ctx.appraisal.map_or(f64::NAN, appraisal_consensus_spread),
            MetricName::Triads => ctx.appraisal.map_or(f64::NAN, |a| {
                nontransitive_triad_count(&comparative_graph(a)).map_or(f64::NAN, |c| c as f64)
            }),
            MetricName::MinEntry => ctx.appraisal.map_or(f64::NAN, |a| a.min_entry()),
            MetricName::LyapunovKl => lyapunov_manager(ctx.w, ctx.x).unwrap_or(f64::NAN),
            MetricName::LyapunovRatio => lyapunov_ratio(ctx.w, ctx.x).unwrap_or(f64::NAN),
        }
    }
}
