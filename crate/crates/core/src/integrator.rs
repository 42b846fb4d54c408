//! Time stepping for every model, with the state kept on its manifold.
//!
//! After each accepted step, entries in `[clamp_floor, 0)` are set to zero
//! and every row (or the assignment vector) is rescaled to sum to one. An
//! entry below `clamp_floor` ends the run with
//! [`TerminalStatus::PositivityLost`]; the dynamics preserve row sums
//! exactly, so anything beyond rounding there is a genuine model event.

use crate::dynamics::{reduced_rate, ModelKind, ModelSpec, ReducedState};
use crate::error::{Error, Result};
use crate::matrix::{sum, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{classify_connectivity, EigenOptions};
use crate::team::{
    feedback_unchecked, performance_unchecked, AppraisalMatrix, Assignment, ObservationMatrix,
    PerformanceFunction, SkillVector,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Rk4,
    /// Dormand-Prince 5(4) with step-size control.
    Rk45,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig<T> {
    pub method: Method,
    /// Fixed step for RK4, initial step for RK45.
    pub h: T,
    pub t_end: T,
    pub sample_every: T,
    pub renorm_tol: T,
    pub clamp_floor: T,
    /// How long the rate must stay below `convergence_tol` before the run
    /// is declared converged.
    pub convergence_window: T,
    pub convergence_tol: T,
    /// Stop as soon as convergence is declared.
    pub stop_on_convergence: bool,
    pub abs_tol: T,
    pub rel_tol: T,
    pub eigen: EigenOptions<T>,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            h: T::lit(0.01),
            t_end: T::lit(100.0),
            sample_every: T::lit(0.1),
            renorm_tol: T::tol(1e-9),
            clamp_floor: -T::tol(1e-9),
            convergence_window: T::lit(5.0),
            convergence_tol: T::tol(1e-8),
            stop_on_convergence: true,
            abs_tol: T::tol(1e-10),
            rel_tol: T::tol(1e-8),
            eigen: EigenOptions::default(),
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > T::zero()) || !(self.h < self.t_end) {
            return Err(Error::Config(format!(
                "step {} must be positive and below t_end {}",
                self.h, self.t_end
            )));
        }
        if !(self.sample_every > T::zero()) {
            return Err(Error::Config("sample_every must be positive".into()));
        }
        if self.clamp_floor > T::zero() {
            return Err(Error::Config("clamp_floor must not be positive".into()));
        }
        if !(self.convergence_window >= T::zero()) || !(self.convergence_tol > T::zero()) {
            return Err(Error::Config("invalid convergence criterion".into()));
        }
        Ok(())
    }
}

/// Starting point of a run: an assignment for the manager model, an
/// appraisal matrix otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState<T> {
    Assignment(Assignment<T>),
    Appraisal(AppraisalMatrix<T>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TerminalStatus {
    Converged,
    TEndReached,
    PositivityLost,
    EigenvectorFailed,
}

impl TerminalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalStatus::Converged => "converged",
            TerminalStatus::TEndReached => "t_end_reached",
            TerminalStatus::PositivityLost => "positivity_lost",
            TerminalStatus::EigenvectorFailed => "eigenvector_failed",
        }
    }
}

/// What a metric hook sees at a sample time.
pub struct SampleContext<'a, T> {
    pub t: T,
    pub x: &'a SkillVector<T>,
    pub w: &'a [T],
    pub appraisal: Option<&'a Matrix<T>>,
    pub p: &'a [T],
    pub phi: &'a [T],
}

/// Named scalar evaluated at every sample. Must be pure.
pub trait MetricHook<T>: Sync {
    fn name(&self) -> &str;
    fn eval(&self, ctx: &SampleContext<'_, T>) -> T;
}

/// A [`MetricHook`] from a closure.
pub struct FnMetric<F> {
    name: String,
    f: F,
}

impl<F> FnMetric<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnMetric {
            name: name.into(),
            f,
        }
    }
}

impl<T, F> MetricHook<T> for FnMetric<F>
where
    F: Fn(&SampleContext<'_, T>) -> T + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, ctx: &SampleContext<'_, T>) -> T {
        (self.f)(ctx)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    /// `None` for the manager model.
    pub appraisal: Option<Matrix<T>>,
    pub w: Vec<T>,
    pub p: Vec<T>,
    pub phi: Vec<T>,
    /// Hook values, aligned with [`Trajectory::metric_names`].
    pub metrics: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub metric_names: Vec<String>,
    pub status: TerminalStatus,
    pub steps: usize,
    pub rejected_steps: usize,
    /// Largest `|row sum - 1|` seen before renormalization.
    pub max_row_sum_drift: T,
    /// Steps whose drift exceeded `renorm_tol`.
    pub renorm_violations: usize,
    pub clamp_events: usize,
    /// Smallest state entry over every accepted step, not just samples.
    pub min_entry: T,
    /// `‖dA‖∞` (or `‖dw‖∞`) at the last evaluated state.
    pub final_rate_norm: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> &Sample<T> {
        self.samples
            .last()
            .expect("a trajectory has at least one sample")
    }

    pub fn metric_index(&self, name: &str) -> Option<usize> {
        self.metric_names.iter().position(|m| m == name)
    }

    /// `(t, value)` pairs of one hook.
    pub fn metric_series(&self, name: &str) -> Option<Vec<(T, T)>> {
        let k = self.metric_index(name)?;
        Some(self.samples.iter().map(|s| (s.t, s.metrics[k])).collect())
    }
}

enum Halt {
    Positivity,
    Eigen,
}

/// Evaluates the model on flattened state.
struct System<'a, T: Scalar> {
    spec: &'a ModelSpec<T>,
    x: &'a SkillVector<T>,
    n: usize,
    eigen: EigenOptions<T>,
    warm: Option<Vec<T>>,
}

impl<'a, T: Scalar> System<'a, T> {
    fn is_manager(&self) -> bool {
        self.spec.model == ModelKind::Manager
    }

    fn rate(&mut self, y: &[T]) -> std::result::Result<Vec<T>, Halt> {
        if self.is_manager() {
            return crate::dynamics::rhs_manager(y, self.x, &self.spec.f)
                .map_err(|_| Halt::Positivity);
        }
        let a = Matrix::from_row_major(self.n, y.to_vec()).expect("state length");
        let w = self
            .spec
            .assignment_of(&a, &self.eigen, self.warm.as_deref())
            .map_err(|_| Halt::Eigen)?;
        let da = self
            .spec
            .appraisal_rate(&a, &w, self.x)
            .map_err(|_| Halt::Eigen)?;
        self.warm = Some(w);
        Ok(da.into_row_major())
    }

    fn observe(&mut self, y: &[T]) -> std::result::Result<Observation<T>, Halt> {
        let (appraisal, w) = if self.is_manager() {
            (None, y.to_vec())
        } else {
            let a = Matrix::from_row_major(self.n, y.to_vec()).expect("state length");
            let w = self
                .spec
                .assignment_of(&a, &self.eigen, self.warm.as_deref())
                .map_err(|_| Halt::Eigen)?;
            self.warm = Some(w.clone());
            (Some(a), w)
        };
        let p = performance_unchecked(self.x.as_slice(), &w, &self.spec.f);
        let phi = match &self.spec.observation {
            Some(m) => feedback_unchecked(&p, m.matrix()),
            None => vec![T::zero(); p.len()],
        };
        Ok((appraisal, w, p, phi))
    }
}

/// Appraisal (if any), assignment, performance and feedback at one state.
type Observation<T> = (Option<Matrix<T>>, Vec<T>, Vec<T>, Vec<T>);

struct Recorder<'h, T: Scalar> {
    hooks: &'h [&'h dyn MetricHook<T>],
    samples: Vec<Sample<T>>,
}

impl<'h, T: Scalar> Recorder<'h, T> {
    fn record(&mut self, sys: &mut System<'_, T>, t: T, y: &[T]) -> std::result::Result<(), Halt> {
        if self.samples.last().is_some_and(|s| s.t >= t) {
            return Ok(());
        }
        let (appraisal, w, p, phi) = sys.observe(y)?;
        let ctx = SampleContext {
            t,
            x: sys.x,
            w: &w,
            appraisal: appraisal.as_ref(),
            p: &p,
            phi: &phi,
        };
        let metrics = self.hooks.iter().map(|h| h.eval(&ctx)).collect();
        self.samples.push(Sample {
            t,
            appraisal,
            w,
            p,
            phi,
            metrics,
        });
        Ok(())
    }
}

struct Manifold<T> {
    n: usize,
    rows: usize,
    max_drift: T,
    violations: usize,
    clamps: usize,
    min_entry: T,
}

impl<T: Scalar> Manifold<T> {
    /// Clamps and renormalizes in place. Returns false if an entry fell
    /// below the floor.
    fn project(&mut self, y: &mut [T], cfg: &IntegratorConfig<T>) -> bool {
        for r in 0..self.rows {
            let row = &mut y[r * self.n..(r + 1) * self.n];
            let s = sum(row);
            let drift = (s - T::one()).abs();
            if drift > cfg.renorm_tol {
                self.violations += 1;
            }
            self.max_drift = self.max_drift.max(drift);
            for v in row.iter_mut() {
                if *v < cfg.clamp_floor || v.is_nan() {
                    return false;
                }
                if *v < T::zero() {
                    *v = T::zero();
                    self.clamps += 1;
                }
            }
            let s = sum(row);
            for v in row.iter_mut() {
                *v /= s;
            }
        }
        let m = y.iter().fold(T::infinity(), |m, &v| m.min(v));
        self.min_entry = self.min_entry.min(m);
        true
    }
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

fn axpy<T: Scalar>(y: &[T], terms: &[(T, &[T])]) -> Vec<T> {
    let mut out = y.to_vec();
    for &(c, k) in terms {
        if c == T::zero() {
            continue;
        }
        for (o, &ki) in out.iter_mut().zip(k) {
            *o += c * ki;
        }
    }
    out
}

/// Checks the model's standing hypotheses on the initial condition.
pub fn validate_initial_state<T: Scalar>(
    spec: &ModelSpec<T>,
    x: &SkillVector<T>,
    initial: &InitialState<T>,
) -> Result<()> {
    let n = x.len();
    match (spec.model, initial) {
        (ModelKind::Manager, InitialState::Assignment(w)) => {
            Error::check_dim("initial assignment", n, w.len())
        }
        (ModelKind::Manager, _) => Err(Error::Config(
            "the manager model starts from an assignment".into(),
        )),
        (_, InitialState::Assignment(_)) => Err(Error::Config(
            "appraisal models start from an appraisal matrix".into(),
        )),
        (model, InitialState::Appraisal(a)) => {
            Error::check_dim("initial appraisal matrix", n, a.dim())?;
            let report = classify_connectivity(a.matrix())?;
            match model {
                ModelKind::AssignAppraise => {
                    if !report.irreducible || !report.positive_diagonal {
                        return Err(Error::Config(
                            "Theorem 2 hypothesis: A(0) must be irreducible with positive diagonal"
                                .into(),
                        ));
                    }
                }
                _ => {
                    if !report.primitive {
                        return Err(Error::Config(
                            "Lemma 1 hypothesis: A(0) must be primitive".into(),
                        ));
                    }
                }
            }
            Ok(())
        }
    }
}

/// Advances `spec` from `initial` until `t_end`, convergence, or a
/// detected model failure.
pub fn integrate<T: Scalar>(
    spec: &ModelSpec<T>,
    x: &SkillVector<T>,
    initial: &InitialState<T>,
    cfg: &IntegratorConfig<T>,
    hooks: &[&dyn MetricHook<T>],
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    let n = x.len();
    spec.validate(n)?;
    validate_initial_state(spec, x, initial)?;

    let (mut y, rows) = match initial {
        InitialState::Assignment(w) => (w.as_slice().to_vec(), 1),
        InitialState::Appraisal(a) => (a.matrix().as_slice().to_vec(), n),
    };
    let mut sys = System {
        spec,
        x,
        n,
        eigen: cfg.eigen,
        warm: None,
    };
    let mut rec = Recorder {
        hooks,
        samples: Vec::new(),
    };
    let mut manifold = Manifold {
        n,
        rows,
        max_drift: T::zero(),
        violations: 0,
        clamps: 0,
        min_entry: y.iter().fold(T::infinity(), |m, &v| m.min(v)),
    };
    let mut out = Stepper {
        steps: 0,
        rejected: 0,
        rate_norm: T::infinity(),
    };

    let status = match rec.record(&mut sys, T::zero(), &y) {
        Err(Halt::Eigen) => TerminalStatus::EigenvectorFailed,
        Err(Halt::Positivity) => TerminalStatus::PositivityLost,
        Ok(()) => match cfg.method {
            Method::Rk4 => out.run_rk4(&mut sys, &mut rec, &mut manifold, cfg, &mut y),
            Method::Rk45 => out.run_rk45(&mut sys, &mut rec, &mut manifold, cfg, &mut y)?,
        },
    };

    Ok(Trajectory {
        samples: rec.samples,
        metric_names: hooks.iter().map(|h| h.name().to_string()).collect(),
        status,
        steps: out.steps,
        rejected_steps: out.rejected,
        max_row_sum_drift: manifold.max_drift,
        renorm_violations: manifold.violations,
        clamp_events: manifold.clamps,
        min_entry: manifold.min_entry,
        final_rate_norm: out.rate_norm,
    })
}

struct Stepper<T> {
    steps: usize,
    rejected: usize,
    rate_norm: T,
}

/// Tracks how long the rate has stayed under tolerance.
struct ConvergenceWatch<T> {
    since: Option<T>,
}

impl<T: Scalar> ConvergenceWatch<T> {
    fn update(&mut self, t: T, rate: T, cfg: &IntegratorConfig<T>) -> bool {
        if rate < cfg.convergence_tol {
            let since = *self.since.get_or_insert(t);
            t - since >= cfg.convergence_window
        } else {
            self.since = None;
            false
        }
    }
}

impl<T: Scalar> Stepper<T> {
    fn run_rk4(
        &mut self,
        sys: &mut System<'_, T>,
        rec: &mut Recorder<'_, T>,
        manifold: &mut Manifold<T>,
        cfg: &IntegratorConfig<T>,
        y: &mut Vec<T>,
    ) -> TerminalStatus {
        let half = T::lit(0.5);
        let sixth = T::one() / T::lit(6.0);
        let total = (cfg.t_end / cfg.h - T::tol(1e-9))
            .ceil()
            .to_usize()
            .unwrap_or(0);
        let mut watch = ConvergenceWatch { since: None };
        let mut next_sample = cfg.sample_every;
        let mut t = T::zero();

        for k in 0..total {
            let k1 = match sys.rate(y) {
                Ok(v) => v,
                Err(h) => return halt_status(h),
            };
            self.rate_norm = inf_norm(&k1);
            if watch.update(t, self.rate_norm, cfg) && cfg.stop_on_convergence {
                return finish(sys, rec, t, y, TerminalStatus::Converged);
            }
            let t_next = (T::from_usize_lossy(k + 1) * cfg.h).min(cfg.t_end);
            let h = t_next - t;
            let stage = |sys: &mut System<'_, T>, terms: &[(T, &[T])]| sys.rate(&axpy(y, terms));
            let k2 = match stage(sys, &[(half * h, &k1)]) {
                Ok(v) => v,
                Err(e) => return halt_status(e),
            };
            let k3 = match stage(sys, &[(half * h, &k2)]) {
                Ok(v) => v,
                Err(e) => return halt_status(e),
            };
            let k4 = match stage(sys, &[(h, &k3)]) {
                Ok(v) => v,
                Err(e) => return halt_status(e),
            };
            let c = h * sixth;
            let mut y_new = axpy(y, &[(c, &k1), (c + c, &k2), (c + c, &k3), (c, &k4)]);
            if !manifold.project(&mut y_new, cfg) {
                return finish(sys, rec, t, y, TerminalStatus::PositivityLost);
            }
            *y = y_new;
            t = t_next;
            self.steps += 1;
            if t >= next_sample - cfg.h * T::tol(1e-6) {
                if let Err(h) = rec.record(sys, t, y) {
                    return halt_status(h);
                }
                while next_sample <= t + cfg.h * T::tol(1e-6) {
                    next_sample += cfg.sample_every;
                }
            }
        }
        if let Ok(k) = sys.rate(y) {
            self.rate_norm = inf_norm(&k);
            if watch.update(t, self.rate_norm, cfg) && cfg.stop_on_convergence {
                return finish(sys, rec, t, y, TerminalStatus::Converged);
            }
        }
        finish(sys, rec, t, y, TerminalStatus::TEndReached)
    }

    fn run_rk45(
        &mut self,
        sys: &mut System<'_, T>,
        rec: &mut Recorder<'_, T>,
        manifold: &mut Manifold<T>,
        cfg: &IntegratorConfig<T>,
        y: &mut Vec<T>,
    ) -> Result<TerminalStatus> {
        let tab = DormandPrince::<T>::new();
        let mut watch = ConvergenceWatch { since: None };
        let mut t = T::zero();
        let mut h = cfg.h;
        let mut next_sample = cfg.sample_every.min(cfg.t_end);
        let mut k1 = match sys.rate(y) {
            Ok(v) => v,
            Err(e) => return Ok(halt_status(e)),
        };
        let min_step = cfg.t_end * T::tol(1e-14);

        while t < cfg.t_end {
            self.rate_norm = inf_norm(&k1);
            if watch.update(t, self.rate_norm, cfg) && cfg.stop_on_convergence {
                return Ok(finish(sys, rec, t, y, TerminalStatus::Converged));
            }
            let h_try = h.min(next_sample - t).min(cfg.t_end - t);
            let stages = (|| -> std::result::Result<(Vec<Vec<T>>, Vec<T>), Halt> {
                let mut ks: Vec<Vec<T>> = vec![k1.clone()];
                for row in tab.a.iter() {
                    let terms: Vec<(T, &[T])> = row
                        .iter()
                        .zip(&ks)
                        .map(|(&c, k)| (c * h_try, k.as_slice()))
                        .collect();
                    ks.push(sys.rate(&axpy(y, &terms))?);
                }
                // the 7th stage is evaluated at the 5th-order solution (FSAL)
                let terms: Vec<(T, &[T])> = tab
                    .b
                    .iter()
                    .zip(&ks)
                    .map(|(&c, k)| (c * h_try, k.as_slice()))
                    .collect();
                let y5 = axpy(y, &terms);
                ks.push(sys.rate(&y5)?);
                Ok((ks, y5))
            })();
            // a trial step that leaves the model's domain is rejected
            let (mut ks, y5) = match stages {
                Ok(v) => v,
                Err(e) => {
                    self.rejected += 1;
                    h = h_try * T::lit(0.25);
                    if h < min_step {
                        return Ok(finish(sys, rec, t, y, halt_status(e)));
                    }
                    continue;
                }
            };
            let mut err = T::zero();
            for i in 0..y.len() {
                let e = ks
                    .iter()
                    .zip(&tab.e)
                    .fold(T::zero(), |acc, (k, &c)| acc + c * k[i])
                    * h_try;
                let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y5[i].abs());
                err = err.max((e / scale).abs());
            }
            let factor = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2)))
                    .min(T::lit(5.0))
                    .max(T::lit(0.2))
            };
            if err <= T::one() {
                let mut y_new = y5;
                if !manifold.project(&mut y_new, cfg) {
                    return Ok(finish(sys, rec, t, y, TerminalStatus::PositivityLost));
                }
                let clamped = manifold.clamps;
                *y = y_new;
                t += h_try;
                self.steps += 1;
                k1 = ks.pop().expect("seven stages");
                if manifold.clamps != clamped {
                    k1 = match sys.rate(y) {
                        Ok(v) => v,
                        Err(e) => return Ok(halt_status(e)),
                    };
                }
                if t >= next_sample - min_step {
                    if let Err(e) = rec.record(sys, t, y) {
                        return Ok(halt_status(e));
                    }
                    next_sample = (next_sample + cfg.sample_every).min(cfg.t_end);
                }
                h = (h_try * factor).min(cfg.sample_every);
            } else {
                self.rejected += 1;
                h = h_try * factor;
            }
            if h < min_step {
                return Err(Error::domain(format!("step size underflow at t = {t}")));
            }
        }
        self.rate_norm = inf_norm(&k1);
        let status = if watch.update(t, self.rate_norm, cfg) && cfg.stop_on_convergence {
            TerminalStatus::Converged
        } else {
            TerminalStatus::TEndReached
        };
        Ok(finish(sys, rec, t, y, status))
    }
}

fn halt_status(h: Halt) -> TerminalStatus {
    match h {
        Halt::Positivity => TerminalStatus::PositivityLost,
        Halt::Eigen => TerminalStatus::EigenvectorFailed,
    }
}

fn finish<T: Scalar>(
    sys: &mut System<'_, T>,
    rec: &mut Recorder<'_, T>,
    t: T,
    y: &[T],
    status: TerminalStatus,
) -> TerminalStatus {
    match rec.record(sys, t, y) {
        Ok(()) => status,
        Err(h) => halt_status(h),
    }
}

struct DormandPrince<T> {
    /// Stage coefficients for stages 2 to 6.
    a: Vec<Vec<T>>,
    /// Fifth-order weights.
    b: Vec<T>,
    /// Difference between fifth- and fourth-order weights, seven stages.
    e: Vec<T>,
}

impl<T: Scalar> DormandPrince<T> {
    fn new() -> Self {
        let l = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
        let b = [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ];
        let b4 = [
            5179.0 / 57600.0,
            0.0,
            7571.0 / 16695.0,
            393.0 / 640.0,
            -92097.0 / 339200.0,
            187.0 / 2100.0,
            1.0 / 40.0,
        ];
        let mut e: Vec<f64> = b.iter().zip(&b4).map(|(x, y)| x - y).collect();
        e.push(-b4[6]);
        DormandPrince {
            a: vec![
                l(&[1.0 / 5.0]),
                l(&[3.0 / 40.0, 9.0 / 40.0]),
                l(&[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]),
                l(&[
                    19372.0 / 6561.0,
                    -25360.0 / 2187.0,
                    64448.0 / 6561.0,
                    -212.0 / 729.0,
                ]),
                l(&[
                    9017.0 / 3168.0,
                    -355.0 / 33.0,
                    46732.0 / 5247.0,
                    49.0 / 176.0,
                    -5103.0 / 18656.0,
                ]),
            ],
            b: l(&b),
            e: l(&e),
        }
    }
}

/// One sample of a reduced run.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSample<T> {
    pub t: T,
    pub a: Vec<T>,
    pub w: Vec<T>,
}

/// Fixed-step RK4 on the reduced self-appraisal dynamics. Uses `cfg.h`,
/// `cfg.t_end` and `cfg.sample_every`.
pub fn integrate_reduced<T: Scalar>(
    state: &ReducedState<T>,
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &ObservationMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Vec<ReducedSample<T>>> {
    cfg.validate()?;
    Error::check_dim("skill vector", state.a.len(), x.len())?;
    let c = state.c.as_slice();
    let rate = |a: &[T]| reduced_rate(a, c, x, f, m.matrix());
    let sample = |t: T, a: &[T]| ReducedSample {
        t,
        a: a.to_vec(),
        w: crate::dynamics::reduced_assignment(a, c),
    };
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let total = (cfg.t_end / cfg.h - T::tol(1e-9))
        .ceil()
        .to_usize()
        .unwrap_or(0);
    let mut a = state.a.clone();
    let mut t = T::zero();
    let mut next_sample = cfg.sample_every;
    let mut out = vec![sample(t, &a)];
    for k in 0..total {
        let t_next = (T::from_usize_lossy(k + 1) * cfg.h).min(cfg.t_end);
        let h = t_next - t;
        let k1 = rate(&a);
        let k2 = rate(&axpy(&a, &[(half * h, &k1)]));
        let k3 = rate(&axpy(&a, &[(half * h, &k2)]));
        let k4 = rate(&axpy(&a, &[(h, &k3)]));
        let c6 = h * sixth;
        a = axpy(&a, &[(c6, &k1), (c6 + c6, &k2), (c6 + c6, &k3), (c6, &k4)]);
        if a.iter().any(|&v| !(v >= T::zero() && v < T::one())) {
            return Err(Error::domain(format!(
                "self-appraisal left [0,1) at t = {t_next}"
            )));
        }
        t = t_next;
        if t >= next_sample - cfg.h * T::tol(1e-6) || k + 1 == total {
            out.push(sample(t, &a));
            while next_sample <= t + cfg.h * T::tol(1e-6) {
                next_sample += cfg.sample_every;
            }
        }
    }
    Ok(out)
}
