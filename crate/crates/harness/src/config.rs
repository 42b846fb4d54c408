//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! n = 6
//! outputs = ["h1", "spread", "triads"]
//!
//! [skills]
//! kind = "dirichlet_uniform"
//!
//! [initial_appraisal]
//! kind = "dirichlet_rows"
//! min_entry = 1e-3
//!
//! [observation]
//! kind = "strongly_connected_random"
//! density = 0.3
//!
//! [model]
//! kind = "assign_appraise"
//!
//! [integrator]
//! t_end = 100.0
//!
//! [hypotheses]
//! satisfies = ["theorem2_irreducible", "theorem3_strongly_connected"]
//! ```
//!
//! Every section is optional except `n`. See the README for the full schema.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use teamdyn_core::{
    AssignmentRule, InfluenceParams, InfluenceRule, IntegratorConfig, Method, PerformanceFunction,
};

use crate::error::{HarnessError, Result};
use crate::hypotheses::Hypothesis;
use crate::metrics::MetricName;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    #[serde(default)]
    pub skills: SkillGen,
    #[serde(default)]
    pub initial_appraisal: AppraisalGen,
    #[serde(default)]
    pub initial_assignment: AssignmentGen,
    #[serde(default)]
    pub observation: ObservationGen,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub integrator: IntegratorSection,
    /// Metric columns for `trajectory.csv`; empty picks the model's defaults.
    #[serde(default)]
    pub outputs: Vec<MetricName>,
    #[serde(default)]
    pub artifacts: ArtifactConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub hypotheses: HypothesisDecl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SkillGen {
    /// Uniform on the simplex, redrawn until every entry is at least
    /// `min_entry`.
    DirichletUniform {
        #[serde(default)]
        min_entry: f64,
    },
    Explicit {
        values: Vec<f64>,
    },
    Uniform,
}

impl Default for SkillGen {
    fn default() -> Self {
        SkillGen::DirichletUniform { min_entry: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AppraisalGen {
    /// Each row uniform on the simplex, redrawn until every entry is at
    /// least `min_entry`, then mixed with the identity:
    /// `A(0) = s I + (1 - s) D` for `s = self_weight`.
    DirichletRows {
        #[serde(default = "default_min_entry")]
        min_entry: f64,
        #[serde(default)]
        self_weight: f64,
    },
    Explicit {
        rows: Vec<Vec<f64>>,
    },
    /// Random weights on a support pattern. Without `pattern`, each
    /// off-diagonal entry is present with probability `density` and the
    /// diagonal is always present.
    SparsePattern {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern: Option<Vec<Vec<u8>>>,
        #[serde(default = "default_density")]
        density: f64,
    },
    /// Every row equal to the skill vector.
    ConsensusOnSkills,
}

impl Default for AppraisalGen {
    fn default() -> Self {
        AppraisalGen::DirichletRows {
            min_entry: default_min_entry(),
            self_weight: 0.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AssignmentGen {
    #[default]
    DirichletUniform,
    Explicit {
        values: Vec<f64>,
    },
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservationGen {
    Explicit {
        rows: Vec<Vec<f64>>,
    },
    /// Every member observes everyone equally, self included.
    Uniform,
    /// A random Hamiltonian cycle plus extra off-diagonal edges with
    /// probability `density`.
    StronglyConnectedRandom {
        #[serde(default = "default_density")]
        density: f64,
    },
    /// A random acyclic graph draining into one sink member that only
    /// observes itself: the sink is the unique globally reachable node.
    SingleSinkRandom {
        #[serde(default = "default_density")]
        density: f64,
    },
    /// Two strongly connected groups where the first also observes the
    /// second but not the reverse: the second group's members are
    /// globally reachable, yet the network is not strongly connected.
    SourceSinkComponents {
        #[serde(default = "default_density")]
        density: f64,
    },
    /// Nodes split into `components` strongly connected groups with no
    /// edges between them.
    DisconnectedComponents {
        #[serde(default = "default_components")]
        components: usize,
        #[serde(default = "default_density")]
        density: f64,
    },
}

impl Default for ObservationGen {
    fn default() -> Self {
        ObservationGen::StronglyConnectedRandom {
            density: default_density(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKindConfig {
    Manager,
    #[default]
    AssignAppraise,
    AssignAppraiseInfluence,
    /// Appraisals frozen at `A(0)` and a fresh uniform random assignment at
    /// every sample.
    RandomBaseline,
}

impl ModelKindConfig {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKindConfig::Manager => "manager",
            ModelKindConfig::AssignAppraise => "assign_appraise",
            ModelKindConfig::AssignAppraiseInfluence => "assign_appraise_influence",
            ModelKindConfig::RandomBaseline => "random_baseline",
        }
    }

    pub fn uses_appraisal(self) -> bool {
        self != ModelKindConfig::Manager
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentRuleConfig {
    #[default]
    Eigenvector,
    InDegree,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceRuleConfig {
    #[default]
    Degroot,
    FriedkinJohnsen,
}

/// A per-member parameter given either once for everyone or as a list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerMember {
    All(f64),
    Each(Vec<f64>),
}

impl PerMember {
    pub fn expand(&self, n: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            PerMember::All(v) => Ok(vec![*v; n]),
            PerMember::Each(v) if v.len() == n => Ok(v.clone()),
            PerMember::Each(v) => Err(HarnessError::Config(format!(
                "{what} has {} entries, expected {n}",
                v.len()
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerformanceConfig {
    PowerLaw {
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    Log1p,
}

impl Default for PerformanceConfig {
    fn default() -> Self {
        PerformanceConfig::PowerLaw {
            gamma: default_gamma(),
        }
    }
}

impl PerformanceConfig {
    pub fn build(self) -> Result<PerformanceFunction> {
        let f = match self {
            PerformanceConfig::PowerLaw { gamma } => PerformanceFunction::power_law(gamma)?,
            PerformanceConfig::Log1p => PerformanceFunction::Log1p,
        };
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKindConfig,
    pub assignment_rule: AssignmentRuleConfig,
    pub influence_rule: InfluenceRuleConfig,
    pub tau_ave: f64,
    pub tau_app: f64,
    /// Friedkin-Johnsen susceptibilities.
    pub lambda: PerMember,
    pub sensitivities: PerMember,
    pub performance: PerformanceConfig,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            kind: ModelKindConfig::default(),
            assignment_rule: AssignmentRuleConfig::default(),
            influence_rule: InfluenceRuleConfig::default(),
            tau_ave: 1.0,
            tau_app: 1.0,
            lambda: PerMember::All(0.5),
            sensitivities: PerMember::All(1.0),
            performance: PerformanceConfig::default(),
        }
    }
}

impl ModelConfig {
    pub fn assignment_rule(&self) -> AssignmentRule {
        match self.assignment_rule {
            AssignmentRuleConfig::Eigenvector => AssignmentRule::Eigenvector,
            AssignmentRuleConfig::InDegree => AssignmentRule::InDegree,
        }
    }

    pub fn influence_rule(&self) -> InfluenceRule {
        match (self.kind, self.influence_rule) {
            (ModelKindConfig::AssignAppraiseInfluence, InfluenceRuleConfig::Degroot) => {
                InfluenceRule::DeGroot
            }
            (ModelKindConfig::AssignAppraiseInfluence, InfluenceRuleConfig::FriedkinJohnsen) => {
                InfluenceRule::FriedkinJohnsen
            }
            _ => InfluenceRule::None,
        }
    }

    pub fn params(&self, n: usize) -> Result<InfluenceParams> {
        let params = InfluenceParams {
            tau_ave: self.tau_ave,
            tau_app: self.tau_app,
            lambda: self.lambda.expand(n, "model.lambda")?,
            sensitivities: self.sensitivities.expand(n, "model.sensitivities")?,
        };
        params.validate(n)?;
        Ok(params)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodConfig {
    #[default]
    Rk4,
    Rk45,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub method: MethodConfig,
    pub h: f64,
    pub t_end: f64,
    pub sample_every: f64,
    pub stop_on_convergence: bool,
    pub convergence_tol: f64,
    pub convergence_window: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub renorm_tol: f64,
    pub clamp_floor: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        IntegratorSection {
            method: MethodConfig::Rk4,
            h: d.h,
            t_end: d.t_end,
            sample_every: d.sample_every,
            stop_on_convergence: d.stop_on_convergence,
            convergence_tol: d.convergence_tol,
            convergence_window: d.convergence_window,
            abs_tol: d.abs_tol,
            rel_tol: d.rel_tol,
            renorm_tol: d.renorm_tol,
            clamp_floor: d.clamp_floor,
        }
    }
}

impl IntegratorSection {
    pub fn build(&self) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            method: match self.method {
                MethodConfig::Rk4 => Method::Rk4,
                MethodConfig::Rk45 => Method::Rk45,
            },
            h: self.h,
            t_end: self.t_end,
            sample_every: self.sample_every,
            renorm_tol: self.renorm_tol,
            clamp_floor: self.clamp_floor,
            convergence_window: self.convergence_window,
            convergence_tol: self.convergence_tol,
            stop_on_convergence: self.stop_on_convergence,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            eigen: Default::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArtifactConfig {
    /// Interval between appraisal snapshots; defaults to a quarter of
    /// `t_end`. The first and last samples are always written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    pub heatmaps: bool,
    /// Also write SVG heatmaps.
    pub svg: bool,
    /// Pixels per matrix entry in PGM heatmaps.
    pub cell_pixels: usize,
}

impl Default for ArtifactConfig {
    fn default() -> Self {
        ArtifactConfig {
            snapshot_every: None,
            heatmaps: true,
            svg: false,
            cell_pixels: 16,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HypothesisDecl {
    pub satisfies: Vec<Hypothesis>,
    pub violates: Vec<Hypothesis>,
}

fn default_min_entry() -> f64 {
    1e-3
}

fn default_density() -> f64 {
    0.3
}

fn default_components() -> usize {
    2
}

fn default_gamma() -> f64 {
    0.5
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Static checks that need no random draws.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(HarnessError::Config(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if let SkillGen::DirichletUniform { min_entry } = self.skills {
            if !(0.0..1.0 / n as f64).contains(&min_entry) {
                return Err(HarnessError::Config(format!(
                    "skills.min_entry must lie in [0, 1/n), got {min_entry}"
                )));
            }
        }
        match &self.initial_appraisal {
            AppraisalGen::DirichletRows {
                min_entry,
                self_weight,
            } => {
                if !(*min_entry > 0.0 && *min_entry < 1.0 / n as f64) {
                    return Err(HarnessError::Config(format!(
                        "initial_appraisal.min_entry must lie in (0, 1/n), got {min_entry}"
                    )));
                }
                if !(0.0..1.0).contains(self_weight) {
                    return Err(HarnessError::Config(format!(
                        "initial_appraisal.self_weight must lie in [0, 1), got {self_weight}"
                    )));
                }
            }
            AppraisalGen::SparsePattern { density, .. } if !(*density > 0.0 && *density <= 1.0) => {
                return Err(HarnessError::Config(format!(
                    "initial_appraisal.density must lie in (0, 1], got {density}"
                )));
            }
            _ => {}
        }
        match self.observation {
            ObservationGen::StronglyConnectedRandom { density }
            | ObservationGen::SingleSinkRandom { density }
            | ObservationGen::SourceSinkComponents { density } => {
                if n < 4
                    && matches!(
                        self.observation,
                        ObservationGen::SourceSinkComponents { .. }
                    )
                {
                    return Err(HarnessError::Config(format!(
                        "source_sink_components needs n >= 4, got {n}"
                    )));
                }
                if !(0.0..=1.0).contains(&density) {
                    return Err(HarnessError::Config(format!(
                        "observation.density must lie in [0, 1], got {density}"
                    )));
                }
            }
            ObservationGen::DisconnectedComponents {
                components,
                density,
            } => {
                if components < 2 || 2 * components > n {
                    return Err(HarnessError::Config(format!(
                        "disconnected_components needs 2 <= components <= n/2, got {components}"
                    )));
                }
                if !(0.0..=1.0).contains(&density) {
                    return Err(HarnessError::Config(format!(
                        "observation.density must lie in [0, 1], got {density}"
                    )));
                }
            }
            _ => {}
        }
        self.model.params(n)?;
        self.model.performance.build()?;
        self.integrator.build()?;
        if let Some(s) = self.artifacts.snapshot_every {
            if !(s > 0.0) {
                return Err(HarnessError::Config(
                    "artifacts.snapshot_every must be positive".into(),
                ));
            }
        }
        if self.artifacts.cell_pixels == 0 {
            return Err(HarnessError::Config(
                "artifacts.cell_pixels must be positive".into(),
            ));
        }
        for m in &self.outputs {
            if m.needs_appraisal() && !self.model.kind.uses_appraisal() {
                return Err(HarnessError::Config(format!(
                    "metric {} needs an appraisal matrix, which the manager model lacks",
                    m.as_str()
                )));
            }
        }
        Ok(())
    }

    /// Metric columns actually recorded.
    pub fn metric_names(&self) -> Vec<MetricName> {
        if !self.outputs.is_empty() {
            return self.outputs.clone();
        }
        match self.model.kind {
            ModelKindConfig::Manager => vec![
                MetricName::H1,
                MetricName::LyapunovKl,
                MetricName::LyapunovRatio,
            ],
            _ => vec![
                MetricName::H1,
                MetricName::Spread,
                MetricName::Triads,
                MetricName::MinEntry,
                MetricName::LyapunovRatio,
            ],
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "experiment".into())
    }
}
