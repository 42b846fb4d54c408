//! Right-hand sides of the manager, assign/appraise and
//! assign/appraise/influence dynamics, their variants, and the closed-form
//! bounds used to monitor trajectories.

use crate::error::{Error, Result};
use crate::matrix::{dot, sum, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{in_degree_raw, left_dominant_eigenvector, perron_left, EigenOptions};
use crate::team::{
    feedback_unchecked, performance_unchecked, AppraisalMatrix, Assignment, InfluenceParams,
    ObservationMatrix, PerformanceFunction, SkillVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// An outside manager adjusts `w` by replicator dynamics.
    Manager,
    AssignAppraise,
    AssignAppraiseInfluence,
}

/// How the workload is derived from the appraisal matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AssignmentRule {
    #[default]
    Eigenvector,
    InDegree,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InfluenceRule {
    #[default]
    None,
    DeGroot,
    /// DeGroot averaging with attachment to the initial appraisals.
    FriedkinJohnsen,
}

/// Which dynamics to run and with which parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec<T> {
    pub model: ModelKind,
    pub assignment_rule: AssignmentRule,
    pub influence_rule: InfluenceRule,
    pub params: InfluenceParams<T>,
    pub f: PerformanceFunction<T>,
    /// Observation network; unused by the manager model.
    pub observation: Option<ObservationMatrix<T>>,
    /// `A(0)`, required by the Friedkin-Johnsen rule.
    pub initial_appraisal: Option<Matrix<T>>,
}

impl<T: Scalar> ModelSpec<T> {
    pub fn manager(n: usize, f: PerformanceFunction<T>) -> Self {
        ModelSpec {
            model: ModelKind::Manager,
            assignment_rule: AssignmentRule::Eigenvector,
            influence_rule: InfluenceRule::None,
            params: InfluenceParams::with_defaults(n),
            f,
            observation: None,
            initial_appraisal: None,
        }
    }

    pub fn assign_appraise(m: ObservationMatrix<T>, f: PerformanceFunction<T>) -> Self {
        let n = m.dim();
        ModelSpec {
            model: ModelKind::AssignAppraise,
            assignment_rule: AssignmentRule::Eigenvector,
            influence_rule: InfluenceRule::None,
            params: InfluenceParams::with_defaults(n),
            f,
            observation: Some(m),
            initial_appraisal: None,
        }
    }

    pub fn assign_appraise_influence(
        m: ObservationMatrix<T>,
        f: PerformanceFunction<T>,
        params: InfluenceParams<T>,
    ) -> Self {
        ModelSpec {
            model: ModelKind::AssignAppraiseInfluence,
            assignment_rule: AssignmentRule::Eigenvector,
            influence_rule: InfluenceRule::DeGroot,
            params,
            f,
            observation: Some(m),
            initial_appraisal: None,
        }
    }

    pub fn with_assignment_rule(mut self, rule: AssignmentRule) -> Self {
        self.assignment_rule = rule;
        self
    }

    /// Switches to Friedkin-Johnsen averaging anchored at `a0`.
    pub fn with_prejudice(mut self, a0: Matrix<T>) -> Self {
        self.influence_rule = InfluenceRule::FriedkinJohnsen;
        self.initial_appraisal = Some(a0);
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.f.validate()?;
        self.params.validate(n)?;
        match (self.model, self.influence_rule) {
            (ModelKind::Manager | ModelKind::AssignAppraise, InfluenceRule::None) => {}
            (
                ModelKind::AssignAppraiseInfluence,
                InfluenceRule::DeGroot | InfluenceRule::FriedkinJohnsen,
            ) => {}
            (model, rule) => {
                return Err(Error::Config(format!(
                    "influence rule {rule:?} is not compatible with model {model:?}"
                )))
            }
        }
        if self.model != ModelKind::Manager {
            let m = self
                .observation
                .as_ref()
                .ok_or_else(|| Error::Config("observation matrix missing".into()))?;
            Error::check_dim("observation matrix", n, m.dim())?;
        }
        if self.influence_rule == InfluenceRule::FriedkinJohnsen {
            let a0 = self.initial_appraisal.as_ref().ok_or_else(|| {
                Error::Config(
                    "Friedkin-Johnsen influence needs the initial appraisal matrix".into(),
                )
            })?;
            Error::check_dim("initial appraisal matrix", n, a0.dim())?;
        }
        Ok(())
    }

    fn observation_matrix(&self) -> Result<&Matrix<T>> {
        self.observation
            .as_ref()
            .map(|m| m.matrix())
            .ok_or_else(|| Error::Config("observation matrix missing".into()))
    }

    /// Assignment implied by an appraisal matrix under this model's rule.
    /// `warm` carries the previous Perron vector between calls.
    pub fn assignment_of(
        &self,
        a: &Matrix<T>,
        eigen: &EigenOptions<T>,
        warm: Option<&[T]>,
    ) -> Result<Vec<T>> {
        match self.assignment_rule {
            AssignmentRule::Eigenvector => perron_left(a, eigen, warm),
            AssignmentRule::InDegree => in_degree_raw(a),
        }
    }

    /// `dA/dt` at `a` given the assignment `w` already computed from `a`.
    pub fn appraisal_rate(&self, a: &Matrix<T>, w: &[T], x: &SkillVector<T>) -> Result<Matrix<T>> {
        let m = self.observation_matrix()?;
        let p = performance_unchecked(x.as_slice(), w, &self.f);
        let phi = feedback_unchecked(&p, m);
        let appraise = appraise_term(a, &phi, &self.params.sensitivities);
        Ok(match self.influence_rule {
            InfluenceRule::None => appraise,
            InfluenceRule::DeGroot => degroot_term(a)
                .scale(T::one() / self.params.tau_ave)
                .add_scaled(T::one() / self.params.tau_app, &appraise),
            InfluenceRule::FriedkinJohnsen => {
                let a0 = self
                    .initial_appraisal
                    .as_ref()
                    .ok_or_else(|| Error::Config("Friedkin-Johnsen influence needs A(0)".into()))?;
                prejudice_term(a, a0, &self.params.lambda)
                    .scale(T::one() / self.params.tau_ave)
                    .add_scaled(T::one() / self.params.tau_app, &appraise)
            }
        })
    }
}

/// Self-appraisals and the Perron vector of the off-diagonal profile, which
/// stays fixed along assign/appraise trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedState<T> {
    pub a: Vec<T>,
    pub c: Assignment<T>,
}

impl<T: Scalar> ReducedState<T> {
    pub fn new(a: Vec<T>, c: Assignment<T>) -> Result<Self> {
        Error::check_dim("self-appraisals", c.len(), a.len())?;
        check_unit_interval(&a)?;
        Ok(ReducedState { a, c })
    }

    /// Splits `A = diag(a) + (I - diag(a)) C` and takes `c = v_left(C)`.
    pub fn from_appraisal(a: &AppraisalMatrix<T>) -> Result<Self> {
        let profile = AppraisalMatrix::new_unchecked(a.off_diagonal_profile()?);
        let c = left_dominant_eigenvector(&profile, &EigenOptions::default(), None)?;
        Self::new(a.self_appraisals(), c)
    }

    /// `w_i ∝ c_i / (1 - a_i)`.
    pub fn assignment(&self) -> Assignment<T> {
        Assignment::new_unchecked(reduced_assignment(&self.a, self.c.as_slice()))
    }
}

fn check_unit_interval<T: Scalar>(a: &[T]) -> Result<()> {
    match a.iter().position(|&v| !(v >= T::zero() && v < T::one())) {
        Some(i) => Err(Error::domain(format!(
            "self-appraisal {i} = {} outside [0,1)",
            a[i]
        ))),
        None => Ok(()),
    }
}

pub(crate) fn reduced_assignment<T: Scalar>(a: &[T], c: &[T]) -> Vec<T> {
    let raw: Vec<T> = a
        .iter()
        .zip(c)
        .map(|(&ai, &ci)| ci / (T::one() - ai))
        .collect();
    let s = sum(&raw);
    raw.into_iter().map(|v| v / s).collect()
}

fn check_interior<T: Scalar>(w: &[T]) -> Result<()> {
    match w.iter().position(|&v| !(v > T::zero())) {
        Some(i) => Err(Error::domain(format!(
            "assignment entry {i} = {} is on the simplex boundary",
            w[i]
        ))),
        None => Ok(()),
    }
}

/// Replicator step `w_i (fitness_i - Σ_k w_k fitness_k)`.
fn replicator<T: Scalar>(w: &[T], fitness: &[T]) -> Vec<T> {
    let mean = dot(w, fitness);
    w.iter()
        .zip(fitness)
        .map(|(&wi, &fi)| wi * (fi - mean))
        .collect()
}

/// Manager dynamics: replicator dynamics with fitness `p_i = f(x_i/w_i)`.
pub fn rhs_manager<T: Scalar>(
    w: &[T],
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
) -> Result<Vec<T>> {
    Error::check_dim("assignment", x.len(), w.len())?;
    check_interior(w)?;
    let p = performance_unchecked(x.as_slice(), w, f);
    Ok(replicator(w, &p))
}

/// `diag(γ ⊙ φ) A_d (I - A)`: entry `(i,j)` is `γ_i φ_i a_ii (δ_ij - a_ij)`.
pub(crate) fn appraise_term<T: Scalar>(a: &Matrix<T>, phi: &[T], gamma: &[T]) -> Matrix<T> {
    let n = a.dim();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        let s = gamma[i] * phi[i] * a[(i, i)];
        let row = out.row_mut(i);
        for (j, o) in row.iter_mut().enumerate() {
            *o = -s * a[(i, j)];
        }
        // the row of (I - A) sums to zero; close it exactly on the diagonal
        let off: T = (0..n)
            .filter(|&j| j != i)
            .fold(T::zero(), |acc, j| acc + row[j]);
        row[i] = -off;
    }
    out
}

/// DeGroot averaging with the influence network equal to the appraisal
/// network: `A² - A`.
pub(crate) fn degroot_term<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    a.matmul(a).sub(a)
}

/// `-Λ (I - A) A + (I - Λ)(A(0) - A)`.
pub(crate) fn prejudice_term<T: Scalar>(a: &Matrix<T>, a0: &Matrix<T>, lambda: &[T]) -> Matrix<T> {
    let avg = degroot_term(a);
    let n = a.dim();
    Matrix::from_fn(n, |i, j| {
        lambda[i] * avg[(i, j)] + (T::one() - lambda[i]) * (a0[(i, j)] - a[(i, j)])
    })
}

fn check_model_inputs<T: Scalar>(
    a: &AppraisalMatrix<T>,
    x: &SkillVector<T>,
    m: &ObservationMatrix<T>,
    sensitivities: &[T],
) -> Result<()> {
    let n = a.dim();
    Error::check_dim("skill vector", n, x.len())?;
    Error::check_dim("observation matrix", n, m.dim())?;
    Error::check_dim("feedback sensitivities", n, sensitivities.len())
}

/// Assign/appraise dynamics `dA = diag(γ ⊙ (p - Mp)) A_d (I - A)` with
/// `w = v_left(A)`. Pass unit `sensitivities` for the homogeneous model.
pub fn rhs_assign_appraise<T: Scalar>(
    a: &AppraisalMatrix<T>,
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &ObservationMatrix<T>,
    sensitivities: &[T],
) -> Result<Matrix<T>> {
    check_model_inputs(a, x, m, sensitivities)?;
    let w = left_dominant_eigenvector(a, &EigenOptions::default(), None)?;
    let p = performance_unchecked(x.as_slice(), w.as_slice(), f);
    let phi = feedback_unchecked(&p, m.matrix());
    Ok(appraise_term(a.matrix(), &phi, sensitivities))
}

/// Reduced dynamics on the self-appraisals, `ȧ_i = a_i (1 - a_i) φ_i` with
/// `w_i ∝ c_i / (1 - a_i)`.
pub fn rhs_reduced<T: Scalar>(
    s: &ReducedState<T>,
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &ObservationMatrix<T>,
) -> Result<Vec<T>> {
    Error::check_dim("skill vector", s.a.len(), x.len())?;
    Error::check_dim("observation matrix", s.a.len(), m.dim())?;
    check_unit_interval(&s.a)?;
    Ok(reduced_rate(&s.a, s.c.as_slice(), x, f, m.matrix()))
}

pub(crate) fn reduced_rate<T: Scalar>(
    a: &[T],
    c: &[T],
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &Matrix<T>,
) -> Vec<T> {
    let w = reduced_assignment(a, c);
    let p = performance_unchecked(x.as_slice(), &w, f);
    let phi = feedback_unchecked(&p, m);
    a.iter()
        .zip(phi)
        .map(|(&ai, fi)| ai * (T::one() - ai) * fi)
        .collect()
}

/// Replicator dynamics for `w` with the time-varying fitness `a_i φ_i`.
pub fn rhs_generalized_replicator<T: Scalar>(
    w: &[T],
    a: &[T],
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &ObservationMatrix<T>,
) -> Result<Vec<T>> {
    Error::check_dim("assignment", x.len(), w.len())?;
    Error::check_dim("self-appraisals", x.len(), a.len())?;
    Error::check_dim("observation matrix", x.len(), m.dim())?;
    check_interior(w)?;
    if let Some(i) = a.iter().position(|&v| !(v >= T::zero() && v <= T::one())) {
        return Err(Error::domain(format!("self-appraisal {i} outside [0,1]")));
    }
    let p = performance_unchecked(x.as_slice(), w, f);
    let phi = feedback_unchecked(&p, m.matrix());
    let fitness: Vec<T> = a.iter().zip(phi).map(|(&ai, fi)| ai * fi).collect();
    Ok(replicator(w, &fitness))
}

/// Assign/appraise/influence dynamics:
/// `dA = F_ave(A) / τ_ave + diag(p - Mp) A_d (I - A) / τ_app`, where
/// `F_ave` is `A² - A` (DeGroot) or the Friedkin-Johnsen form anchored at
/// `a0`.
pub fn rhs_assign_appraise_influence<T: Scalar>(
    a: &AppraisalMatrix<T>,
    x: &SkillVector<T>,
    f: &PerformanceFunction<T>,
    m: &ObservationMatrix<T>,
    params: &InfluenceParams<T>,
    rule: InfluenceRule,
    a0: Option<&Matrix<T>>,
) -> Result<Matrix<T>> {
    let n = a.dim();
    params.validate(n)?;
    check_model_inputs(a, x, m, &params.sensitivities)?;
    let spec = ModelSpec {
        model: ModelKind::AssignAppraiseInfluence,
        assignment_rule: AssignmentRule::Eigenvector,
        influence_rule: rule,
        params: params.clone(),
        f: *f,
        observation: Some(m.clone()),
        initial_appraisal: a0.cloned(),
    };
    spec.validate(n)?;
    let w = left_dominant_eigenvector(a, &EigenOptions::default(), None)?;
    spec.appraisal_rate(a.matrix(), w.as_slice(), x)
}

/// Box constants `(γ0, ξ0)` bounding the assignment along
/// assign/appraise/influence trajectories: `ξ0 ≤ w_i(t) ≤ 1 - (n-1) ξ0`.
pub fn theorem4_bounds<T: Scalar>(x: &SkillVector<T>, w0: &Assignment<T>) -> Result<(T, T)> {
    Error::check_dim("initial assignment", x.len(), w0.len())?;
    let ratios: Vec<T> = x
        .as_slice()
        .iter()
        .zip(w0.as_slice())
        .map(|(&xi, &wi)| xi / wi)
        .collect();
    let hi = ratios.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    let lo = ratios.iter().fold(T::infinity(), |m, &v| m.min(v));
    let gamma0 = hi / lo;
    let n1 = T::from_usize_lossy(x.len() - 1);
    let xi0 = T::one() / (T::one() + n1 * (x.max() / x.min()) * gamma0);
    Ok((gamma0, xi0))
}

/// Smallest `τ_app / τ_ave` for which appraisals provably stay bounded away
/// from zero:
/// `((1 - ξ0)/ξ0) (f(x_max/ξ0) - f(x_min/(1 - (n-1) ξ0)))`, floored at 0.
pub fn lemma2_tau_threshold<T: Scalar>(
    x: &SkillVector<T>,
    xi0: T,
    f: &PerformanceFunction<T>,
    n: usize,
) -> Result<T> {
    Error::check_dim("skill vector", n, x.len())?;
    let n1 = T::from_usize_lossy(n - 1);
    if !(xi0 > T::zero() && xi0 < T::one() / n1) {
        return Err(Error::domain(format!("xi0 = {xi0} outside (0, 1/(n-1))")));
    }
    let spread = f.eval(x.max() / xi0) - f.eval(x.min() / (T::one() - n1 * xi0));
    Ok(((T::one() - xi0) / xi0 * spread).max(T::zero()))
}

/// `ζ_i = (c_i / x_i) min_k (x_k / c_k)(1 - a_k(0))`; self-appraisals of
/// the reduced dynamics stay below `1 - ζ_i`.
pub fn omega_invariant_bound<T: Scalar>(
    a0: &[T],
    c: &Assignment<T>,
    x: &SkillVector<T>,
) -> Result<Vec<T>> {
    Error::check_dim("self-appraisals", x.len(), a0.len())?;
    Error::check_dim("profile eigenvector", x.len(), c.len())?;
    check_unit_interval(a0)?;
    let (xs, cs) = (x.as_slice(), c.as_slice());
    let floor = (0..xs.len())
        .map(|k| xs[k] / cs[k] * (T::one() - a0[k]))
        .fold(T::infinity(), |m, v| m.min(v));
    Ok((0..xs.len()).map(|i| cs[i] / xs[i] * floor).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sqrt_f() -> PerformanceFunction<f64> {
        PerformanceFunction::default()
    }

    fn swap2() -> ObservationMatrix<f64> {
        ObservationMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn manager_equilibrium_and_tangency() {
        let x = SkillVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let dw = rhs_manager(x.as_slice(), &x, &sqrt_f()).unwrap();
        for v in dw {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-16);
        }
        let dw = rhs_manager(&[0.4, 0.3, 0.2, 0.1], &x, &sqrt_f()).unwrap();
        assert_abs_diff_eq!(sum(&dw), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn manager_two_member_value() {
        // p = (√2, √(2/3)), mean p̄ = 0.25 √2 + 0.75 √(2/3)
        let x = SkillVector::new(vec![0.5, 0.5]).unwrap();
        let dw = rhs_manager(&[0.25, 0.75], &x, &sqrt_f()).unwrap();
        let (p1, p2) = (2f64.sqrt(), (2.0f64 / 3.0).sqrt());
        let mean = 0.25 * p1 + 0.75 * p2;
        assert_abs_diff_eq!(dw[0], 0.25 * (p1 - mean), epsilon = 1e-15);
        assert_abs_diff_eq!(dw[0], 0.11207, epsilon = 1e-5);
        assert_abs_diff_eq!(dw[1], -0.11207, epsilon = 1e-5);
    }

    #[test]
    fn manager_rejects_boundary() {
        let x = SkillVector::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            rhs_manager(&[0.0, 1.0], &x, &sqrt_f()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn assign_appraise_symmetric_equilibrium() {
        let x = SkillVector::uniform(3).unwrap();
        let a = AppraisalMatrix::from_rows(&[
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.2, 0.3],
            vec![0.3, 0.3, 0.4],
        ])
        .unwrap();
        let m = ObservationMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        let da = rhs_assign_appraise(&a, &x, &sqrt_f(), &m, &[1.0; 3]).unwrap();
        assert!(da.max_abs() < 1e-11);
    }

    #[test]
    fn assign_appraise_entrywise_form() {
        // entrywise: ȧ_ii = a_ii(1-a_ii)φ_i, ȧ_ij = -a_ii a_ij φ_i with w = (1/3, 2/3)
        let a = AppraisalMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let x = SkillVector::new(vec![0.25, 0.75]).unwrap();
        let da = rhs_assign_appraise(&a, &x, &sqrt_f(), &swap2(), &[1.0, 1.0]).unwrap();
        let p = [(0.25f64 * 3.0).sqrt(), (0.75f64 * 1.5).sqrt()];
        let phi = [p[0] - p[1], p[1] - p[0]];
        let am = a.matrix();
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j {
                    am[(i, i)] * (1.0 - am[(i, i)]) * phi[i]
                } else {
                    -am[(i, i)] * am[(i, j)] * phi[i]
                };
                assert_abs_diff_eq!(da[(i, j)], expected, epsilon = 1e-11);
            }
        }
        for s in da.row_sums() {
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn sensitivities_scale_rows() {
        let a = AppraisalMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let x = SkillVector::new(vec![0.25, 0.75]).unwrap();
        let base = rhs_assign_appraise(&a, &x, &sqrt_f(), &swap2(), &[1.0, 1.0]).unwrap();
        let scaled = rhs_assign_appraise(&a, &x, &sqrt_f(), &swap2(), &[2.0, 0.5]).unwrap();
        assert_abs_diff_eq!(scaled[(0, 1)], 2.0 * base[(0, 1)], epsilon = 1e-15);
        assert_abs_diff_eq!(scaled[(1, 1)], 0.5 * base[(1, 1)], epsilon = 1e-15);
    }

    #[test]
    fn reduced_absorbing_face_and_equilibrium() {
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let m = ObservationMatrix::new(Matrix::from_fn(3, |i, j| if i == j { 0.0 } else { 0.5 }))
            .unwrap();
        let c = Assignment::new(vec![0.3, 0.3, 0.4]).unwrap();
        let s = ReducedState::new(vec![0.0; 3], c).unwrap();
        assert_eq!(rhs_reduced(&s, &x, &sqrt_f(), &m).unwrap(), vec![0.0; 3]);

        let s = ReducedState::new(vec![0.4; 3], Assignment::from(&x)).unwrap();
        assert_abs_diff_eq!(
            crate::matrix::max_abs_diff(s.assignment().as_slice(), x.as_slice()),
            0.0,
            epsilon = 1e-15
        );
        for v in rhs_reduced(&s, &x, &sqrt_f(), &m).unwrap() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        }
        assert!(ReducedState::new(vec![1.0, 0.2, 0.2], Assignment::uniform(3)).is_err());
    }

    #[test]
    fn generalized_replicator_trivial_cases() {
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let m = ObservationMatrix::new(Matrix::from_fn(3, |_, _| 1.0 / 3.0)).unwrap();
        let dw =
            rhs_generalized_replicator(&[0.5, 0.3, 0.2], &[0.0; 3], &x, &sqrt_f(), &m).unwrap();
        assert_eq!(dw, vec![0.0; 3]);
        let dw =
            rhs_generalized_replicator(x.as_slice(), &[0.3, 0.6, 0.9], &x, &sqrt_f(), &m).unwrap();
        for v in dw {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        }
        assert!(
            rhs_generalized_replicator(&[0.0, 0.5, 0.5], &[0.5; 3], &x, &sqrt_f(), &m).is_err()
        );
    }

    #[test]
    fn influence_consensus_at_truth_is_stationary() {
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = AppraisalMatrix::new(Matrix::rank_one_rows(x.as_slice())).unwrap();
        let m =
            ObservationMatrix::new(Matrix::from_fn(
                3,
                |i, j| if j == (i + 1) % 3 { 1.0 } else { 0.0 },
            ))
            .unwrap();
        let da = rhs_assign_appraise_influence(
            &a,
            &x,
            &sqrt_f(),
            &m,
            &InfluenceParams::with_defaults(3),
            InfluenceRule::DeGroot,
            None,
        )
        .unwrap();
        assert!(da.max_abs() < 1e-11);
    }

    #[test]
    fn influence_is_sum_of_terms() {
        let a = AppraisalMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let x = SkillVector::new(vec![0.25, 0.75]).unwrap();
        let mut params = InfluenceParams::with_defaults(2);
        params.tau_ave = 2.0;
        params.tau_app = 0.5;
        let da = rhs_assign_appraise_influence(
            &a,
            &x,
            &sqrt_f(),
            &swap2(),
            &params,
            InfluenceRule::DeGroot,
            None,
        )
        .unwrap();
        let am = a.matrix();
        let app = rhs_assign_appraise(&a, &x, &sqrt_f(), &swap2(), &[1.0, 1.0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let sq: f64 = (0..2).map(|k| am[(i, k)] * am[(k, j)]).sum();
                let expected = (sq - am[(i, j)]) / 2.0 + app[(i, j)] / 0.5;
                assert_abs_diff_eq!(da[(i, j)], expected, epsilon = 1e-12);
            }
        }
        for s in da.row_sums() {
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn prejudice_requires_initial_matrix() {
        let a = AppraisalMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let x = SkillVector::new(vec![0.25, 0.75]).unwrap();
        let err = rhs_assign_appraise_influence(
            &a,
            &x,
            &sqrt_f(),
            &swap2(),
            &InfluenceParams::with_defaults(2),
            InfluenceRule::FriedkinJohnsen,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn prejudice_with_full_attachment_pulls_back_to_start() {
        // Λ = 0: F_ave = A(0) - A
        let a = AppraisalMatrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let a0 = Matrix::from_rows(&[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let f = prejudice_term(a.matrix(), &a0, &[0.0, 0.0]);
        assert_abs_diff_eq!(f[(0, 0)], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(f[(1, 0)], -0.15, epsilon = 1e-15);
        let g = prejudice_term(a.matrix(), &a0, &[1.0, 1.0]);
        assert_eq!(g, degroot_term(a.matrix()));
    }

    #[test]
    fn theorem4_bound_examples() {
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let (g, xi) = theorem4_bounds(&x, &Assignment::from(&x)).unwrap();
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xi, 1.0 / (1.0 + 2.0 * 2.5), epsilon = 1e-15);

        let x2 = SkillVector::new(vec![0.5, 0.5]).unwrap();
        let (_, xi) = theorem4_bounds(&x2, &Assignment::from(&x2)).unwrap();
        assert_abs_diff_eq!(xi, 0.5, epsilon = 1e-15);

        let (g, xi) = theorem4_bounds(&x, &Assignment::new(vec![1.0 / 3.0; 3]).unwrap()).unwrap();
        assert_abs_diff_eq!(g, 2.5, epsilon = 1e-14);
        assert_abs_diff_eq!(xi, 1.0 / 13.5, epsilon = 1e-15);
    }

    #[test]
    fn lemma2_examples() {
        let x = SkillVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(lemma2_tau_threshold(&x, 0.5, &sqrt_f(), 2).unwrap(), 0.0);
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        // 12.5 (√6.75 - √(0.2·13.5/11.5)), evaluated independently
        let t = lemma2_tau_threshold(&x, 1.0 / 13.5, &sqrt_f(), 3).unwrap();
        assert_abs_diff_eq!(t, 26.419_156_243_762_09, epsilon = 1e-9);
        assert!(lemma2_tau_threshold(&x, 0.6, &sqrt_f(), 3).is_err());
        assert!(lemma2_tau_threshold(&x, 0.0, &sqrt_f(), 3).is_err());
    }

    #[test]
    fn lemma2_grows_with_skill_spread() {
        let mut last = -1.0;
        for spread in [1.0, 1.5, 2.0, 3.0, 5.0] {
            let x = SkillVector::normalized(vec![1.0, 1.0, spread]).unwrap();
            let t = lemma2_tau_threshold(&x, 0.1, &sqrt_f(), 3).unwrap();
            assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn omega_bound_examples() {
        let x = SkillVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let zeta = omega_invariant_bound(&[0.3; 3], &Assignment::from(&x), &x).unwrap();
        for z in zeta {
            assert_abs_diff_eq!(z, 0.7, epsilon = 1e-15);
        }
        let c = Assignment::new(vec![0.4, 0.4, 0.2]).unwrap();
        let zeta = omega_invariant_bound(&[0.0; 3], &c, &x).unwrap();
        // min_k x_k/c_k = 0.5
        assert_abs_diff_eq!(zeta[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta[1], 0.4 / 0.3 * 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta[2], 0.2 / 0.5 * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn spec_validation() {
        let spec = ModelSpec::assign_appraise(swap2(), sqrt_f());
        assert!(spec.validate(2).is_ok());
        assert!(spec.validate(3).is_err());
        let mut bad = spec.clone();
        bad.influence_rule = InfluenceRule::DeGroot;
        assert!(matches!(bad.validate(2), Err(Error::Config(_))));
        let mut fj = ModelSpec::assign_appraise_influence(
            swap2(),
            sqrt_f(),
            InfluenceParams::with_defaults(2),
        );
        fj.influence_rule = InfluenceRule::FriedkinJohnsen;
        assert!(fj.validate(2).is_err());
        assert!(ModelSpec::<f64>::manager(4, sqrt_f()).validate(4).is_ok());
    }
}
