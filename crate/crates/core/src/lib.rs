//! Task assignment and collective learning in teams.
//!
//! A team of `n` members has fixed relative skills `x`. Work is split by an
//! assignment `w`, each member's performance is `f(x_i / w_i)`, and members
//! compare their performance against parts of the task given by an
//! observation matrix `M`. Three models drive `w` towards `x`:
//!
//! * the manager model, a replicator equation on `w` run by an outsider;
//! * assign/appraise, where `w` is the Perron vector of the appraisal matrix
//!   `A` and each member shifts weight between self and others according to
//!   their feedback;
//! * assign/appraise/influence, which adds DeGroot averaging of appraisals.
//!
//! Variants cover in-degree assignment, partial observation, prejudiced
//! (Friedkin-Johnsen) averaging and heterogeneous sensitivities.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod matrix;
pub mod metrics;
pub mod scalar;
pub mod spectral;
pub mod team;

pub use dynamics::{
    lemma2_tau_threshold, omega_invariant_bound, rhs_assign_appraise,
    rhs_assign_appraise_influence, rhs_generalized_replicator, rhs_manager, rhs_reduced,
    theorem4_bounds, AssignmentRule, InfluenceRule, ModelKind,
};
pub use error::{Error, Result};
pub use integrator::{
    integrate, integrate_reduced, validate_initial_state, FnMetric, Method, MetricHook,
    SampleContext, TerminalStatus,
};
pub use metrics::{
    appraisal_consensus_spread, comparative_graph, lyapunov_manager, lyapunov_ratio,
    nontransitive_triad_count, ComparativeAppraisalGraph,
};
pub use scalar::Scalar;
pub use spectral::{
    classify_connectivity, in_degree_assignment, left_dominant_eigenvector, workload_diffusion,
    ConnectivityReport,
};
pub use team::{feedback_signal, mismatch_h1, performance};

pub type Matrix = matrix::Matrix<f64>;
pub type SkillVector = team::SkillVector<f64>;
pub type Assignment = team::Assignment<f64>;
pub type AppraisalMatrix = team::AppraisalMatrix<f64>;
pub type ObservationMatrix = team::ObservationMatrix<f64>;
pub type PerformanceFunction = team::PerformanceFunction<f64>;
pub type InfluenceParams = team::InfluenceParams<f64>;
pub type ModelSpec = dynamics::ModelSpec<f64>;
pub type ReducedState = dynamics::ReducedState<f64>;
pub type EigenOptions = spectral::EigenOptions<f64>;
pub type IntegratorConfig = integrator::IntegratorConfig<f64>;
pub type InitialState = integrator::InitialState<f64>;
pub type Trajectory = integrator::Trajectory<f64>;
pub type Sample = integrator::Sample<f64>;
pub type ReducedSample = integrator::ReducedSample<f64>;
