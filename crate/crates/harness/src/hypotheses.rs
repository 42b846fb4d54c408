//! Model hypotheses a config claims to satisfy or to violate on purpose.
//!
//! A hypothesis that fails without being declared violated is a config
//! error naming it, and so is a declaration that turns out false. Some
//! hypotheses are preconditions of the integrator itself and cannot be
//! waived.

use std::fmt;

use serde::{Deserialize, Serialize};
use teamdyn_core::{classify_connectivity, ConnectivityReport};

use crate::config::{AssignmentRuleConfig, ExperimentConfig, InfluenceRuleConfig, ModelKindConfig};
use crate::error::{HarnessError, Result};
use crate::generate::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Theorem1Interior,
    Theorem2Irreducible,
    Theorem3StronglyConnected,
    Theorem4GloballyReachable,
    Theorem4PositiveAppraisal,
    Theorem4Degroot,
    EigenvectorAssignment,
    Lemma1Primitive,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 8] = [
        Hypothesis::Theorem1Interior,
        Hypothesis::Theorem2Irreducible,
        Hypothesis::Theorem3StronglyConnected,
        Hypothesis::Theorem4GloballyReachable,
        Hypothesis::Theorem4PositiveAppraisal,
        Hypothesis::Theorem4Degroot,
        Hypothesis::EigenvectorAssignment,
        Hypothesis::Lemma1Primitive,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Hypothesis::Theorem1Interior => "theorem1_interior",
            Hypothesis::Theorem2Irreducible => "theorem2_irreducible",
            Hypothesis::Theorem3StronglyConnected => "theorem3_strongly_connected",
            Hypothesis::Theorem4GloballyReachable => "theorem4_globally_reachable",
            Hypothesis::Theorem4PositiveAppraisal => "theorem4_positive_appraisal",
            Hypothesis::Theorem4Degroot => "theorem4_degroot",
            Hypothesis::EigenvectorAssignment => "eigenvector_assignment",
            Hypothesis::Lemma1Primitive => "lemma1_primitive",
        }
    }

    /// Human-readable statement, used in error messages.
    pub fn statement(self) -> &'static str {
        match self {
            Hypothesis::Theorem1Interior => {
                "Theorem 1 hypothesis: interior initial assignment w(0)"
            }
            Hypothesis::Theorem2Irreducible => {
                "Theorem 2 hypothesis: irreducible A(0) with positive diagonal"
            }
            Hypothesis::Theorem3StronglyConnected => {
                "Theorem 3 hypothesis: strongly connected observation network M"
            }
            Hypothesis::Theorem4GloballyReachable => {
                "Theorem 4 hypothesis: observation network M has a globally reachable node"
            }
            Hypothesis::Theorem4PositiveAppraisal => {
                "Theorem 4 hypothesis: entrywise positive A(0)"
            }
            Hypothesis::Theorem4Degroot => {
                "Theorem 4 hypothesis: DeGroot influence without prejudice"
            }
            Hypothesis::EigenvectorAssignment => {
                "Theorems 3-4 hypothesis: assignment by eigenvector centrality"
            }
            Hypothesis::Lemma1Primitive => "Lemma 1 hypothesis: primitive A(0)",
        }
    }

    /// Whether the integrator refuses to run when this fails.
    pub fn is_hard(self) -> bool {
        matches!(
            self,
            Hypothesis::Theorem1Interior
                | Hypothesis::Theorem2Irreducible
                | Hypothesis::Lemma1Primitive
        )
    }

    /// Hypotheses that bear on a model kind.
    pub fn relevant_to(kind: ModelKindConfig) -> &'static [Hypothesis] {
        match kind {
            ModelKindConfig::Manager => &[Hypothesis::Theorem1Interior],
            ModelKindConfig::AssignAppraise => &[
                Hypothesis::Theorem2Irreducible,
                Hypothesis::Theorem3StronglyConnected,
                Hypothesis::EigenvectorAssignment,
            ],
            ModelKindConfig::AssignAppraiseInfluence => &[
                Hypothesis::Lemma1Primitive,
                Hypothesis::Theorem4GloballyReachable,
                Hypothesis::Theorem4PositiveAppraisal,
                Hypothesis::Theorem4Degroot,
                Hypothesis::EigenvectorAssignment,
            ],
            ModelKindConfig::RandomBaseline => &[],
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.statement())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisResult {
    pub hypothesis: Hypothesis,
    pub holds: bool,
    pub declared_violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub results: Vec<HypothesisResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observation: Option<ConnectivitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_appraisal: Option<ConnectivitySummary>,
}

/// Serializable subset of a [`ConnectivityReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivitySummary {
    pub strongly_connected: bool,
    pub primitive: bool,
    pub globally_reachable_nodes: Vec<usize>,
    pub positive_diagonal: bool,
}

impl From<&ConnectivityReport> for ConnectivitySummary {
    fn from(r: &ConnectivityReport) -> Self {
        ConnectivitySummary {
            strongly_connected: r.strongly_connected,
            primitive: r.primitive,
            globally_reachable_nodes: r.globally_reachable_nodes.iter().copied().collect(),
            positive_diagonal: r.positive_diagonal,
        }
    }
}

fn holds(
    h: Hypothesis,
    cfg: &ExperimentConfig,
    inst: &Instance,
    m: Option<&ConnectivityReport>,
    a: Option<&ConnectivityReport>,
) -> bool {
    match h {
        Hypothesis::Theorem1Interior => inst
            .w0
            .as_ref()
            .is_some_and(|w| w.as_slice().iter().all(|&v| v > 0.0)),
        Hypothesis::Theorem2Irreducible => a.is_some_and(|r| r.irreducible && r.positive_diagonal),
        Hypothesis::Theorem3StronglyConnected => m.is_some_and(|r| r.strongly_connected),
        Hypothesis::Theorem4GloballyReachable => m.is_some_and(|r| r.has_globally_reachable_node),
        Hypothesis::Theorem4PositiveAppraisal => inst
            .a0
            .as_ref()
            .is_some_and(|a0| a0.matrix().min_entry() > 0.0),
        Hypothesis::Theorem4Degroot => cfg.model.influence_rule == InfluenceRuleConfig::Degroot,
        Hypothesis::EigenvectorAssignment => {
            cfg.model.assignment_rule == AssignmentRuleConfig::Eigenvector
        }
        Hypothesis::Lemma1Primitive => a.is_some_and(|r| r.primitive),
    }
}

/// Evaluates every relevant hypothesis and reconciles it with the config's
/// declarations.
pub fn check_hypotheses(cfg: &ExperimentConfig, inst: &Instance) -> Result<HypothesisReport> {
    let kind = cfg.model.kind;
    let relevant = Hypothesis::relevant_to(kind);
    let decl = &cfg.hypotheses;
    for h in decl.satisfies.iter().chain(&decl.violates) {
        if !relevant.contains(h) {
            return Err(HarnessError::Config(format!(
                "hypothesis {} does not apply to the {} model",
                h.key(),
                kind.as_str()
            )));
        }
    }
    if let Some(h) = decl.satisfies.iter().find(|h| decl.violates.contains(h)) {
        return Err(HarnessError::Config(format!(
            "hypothesis {} declared both satisfied and violated",
            h.key()
        )));
    }

    let m_report = if kind == ModelKindConfig::Manager {
        None
    } else {
        Some(classify_connectivity(inst.m.matrix())?)
    };
    let a_report = match &inst.a0 {
        Some(a0) => Some(classify_connectivity(a0.matrix())?),
        None => None,
    };

    let mut results = Vec::new();
    for &h in relevant {
        let ok = holds(h, cfg, inst, m_report.as_ref(), a_report.as_ref());
        let declared_violated = decl.violates.contains(&h);
        if !ok && h.is_hard() {
            return Err(HarnessError::Config(format!(
                "{} does not hold",
                h.statement()
            )));
        }
        if !ok && !declared_violated {
            return Err(HarnessError::Config(format!(
                "{} does not hold; declare it under hypotheses.violates to run anyway",
                h.statement()
            )));
        }
        if ok && declared_violated {
            return Err(HarnessError::Config(format!(
                "{} was declared violated but holds",
                h.statement()
            )));
        }
        results.push(HypothesisResult {
            hypothesis: h,
            holds: ok,
            declared_violated,
        });
    }
    Ok(HypothesisReport {
        results,
        observation: m_report.as_ref().map(Into::into),
        initial_appraisal: a_report.as_ref().map(Into::into),
    })
}
