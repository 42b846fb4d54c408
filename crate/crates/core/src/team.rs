//! Ground-truth team state, the performance model and feedback signals.

use crate::error::{Error, Result};
use crate::matrix::{sum, Matrix};
use crate::scalar::Scalar;

/// Tolerance on simplex and row-sum constraints for inputs fixed over a run.
pub const STATIC_TOL: f64 = 1e-12;
/// Tolerance on simplex and row-sum constraints for integrated state.
pub const RUNTIME_TOL: f64 = 1e-9;

fn check_simplex<T: Scalar>(what: &str, v: &[T], tol: f64) -> Result<()> {
    if let Some(i) = v.iter().position(|&x| !(x > T::zero()) || !x.is_finite()) {
        return Err(Error::domain(format!(
            "{what}: entry {i} = {} is not strictly positive",
            v[i]
        )));
    }
    let s = sum(v);
    if (s - T::one()).abs() > T::tol(tol) {
        return Err(Error::domain(format!("{what}: entries sum to {s}, not 1")));
    }
    Ok(())
}

fn check_row_stochastic<T: Scalar>(what: &str, m: &Matrix<T>, tol: f64) -> Result<()> {
    for (i, row) in m.rows().enumerate() {
        if let Some(j) = row
            .iter()
            .position(|&v| !(v >= T::zero()) || !v.is_finite())
        {
            return Err(Error::domain(format!(
                "{what}: entry ({i},{j}) = {} is negative",
                row[j]
            )));
        }
        let s = sum(row);
        if (s - T::one()).abs() > T::tol(tol) {
            return Err(Error::domain(format!("{what}: row {i} sums to {s}, not 1")));
        }
    }
    Ok(())
}

/// Relative skill levels `x` of the team members, a point of the open simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SkillVector<T>(Vec<T>);

impl<T: Scalar> SkillVector<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::domain("a team needs at least two members"));
        }
        check_simplex("skill vector", &x, STATIC_TOL)?;
        Ok(SkillVector(x))
    }

    /// Rescales positive weights onto the simplex.
    pub fn normalized(raw: Vec<T>) -> Result<Self> {
        let s = sum(&raw);
        Self::new(raw.into_iter().map(|v| v / s).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![T::one() / T::from_usize_lossy(n); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn max(&self) -> T {
        self.0.iter().fold(T::neg_infinity(), |m, &v| m.max(v))
    }

    pub fn min(&self) -> T {
        self.0.iter().fold(T::infinity(), |m, &v| m.min(v))
    }
}

/// Workload fractions `w`, a point of the open simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<T>(Vec<T>);

impl<T: Scalar> Assignment<T> {
    pub fn new(w: Vec<T>) -> Result<Self> {
        check_simplex("assignment", &w, RUNTIME_TOL)?;
        Ok(Assignment(w))
    }

    pub fn uniform(n: usize) -> Self {
        Assignment(vec![T::one() / T::from_usize_lossy(n); n])
    }

    /// Wraps a vector the caller already knows to be on the simplex.
    pub(crate) fn new_unchecked(w: Vec<T>) -> Self {
        Assignment(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T: Scalar> From<&SkillVector<T>> for Assignment<T> {
    fn from(x: &SkillVector<T>) -> Self {
        Assignment(x.0.clone())
    }
}

/// Row-stochastic nonnegative matrix of interpersonal appraisals.
#[derive(Clone, Debug, PartialEq)]
pub struct AppraisalMatrix<T>(Matrix<T>);

impl<T: Scalar> AppraisalMatrix<T> {
    pub fn new(a: Matrix<T>) -> Result<Self> {
        check_row_stochastic("appraisal matrix", &a, RUNTIME_TOL)?;
        Ok(AppraisalMatrix(a))
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Wraps integrator stage values, which may carry rounding-level
    /// violations of the row-sum and sign constraints.
    pub(crate) fn new_unchecked(a: Matrix<T>) -> Self {
        AppraisalMatrix(a)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Self-appraisals `a_ii`.
    pub fn self_appraisals(&self) -> Vec<T> {
        self.0.diagonal()
    }

    /// Splits `A = diag(a) + (I - diag(a)) C` and returns `C`, the
    /// zero-diagonal row-stochastic matrix of normalized off-diagonal
    /// profiles. Requires every `a_ii < 1`.
    pub fn off_diagonal_profile(&self) -> Result<Matrix<T>> {
        let n = self.dim();
        let mut c = Matrix::zeros(n);
        for i in 0..n {
            let rest = T::one() - self.0[(i, i)];
            if !(rest > T::zero()) {
                return Err(Error::domain(format!(
                    "self-appraisal a_{i}{i} = 1 leaves no off-diagonal profile"
                )));
            }
            for j in 0..n {
                if j != i {
                    c[(i, j)] = self.0[(i, j)] / rest;
                }
            }
        }
        Ok(c)
    }
}

/// Row-stochastic nonnegative matrix `M` defining who each member compares
/// their own performance against.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservationMatrix<T>(Matrix<T>);

impl<T: Scalar> ObservationMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        check_row_stochastic("observation matrix", &m, STATIC_TOL)?;
        Ok(ObservationMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// Concave increasing map from skill-to-workload ratio to performance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PerformanceFunction<T> {
    /// `f(r) = r^γ` with `0 < γ < 1`.
    PowerLaw { gamma: T },
    /// `f(r) = ln(1 + r)`.
    Log1p,
}

impl<T: Scalar> Default for PerformanceFunction<T> {
    fn default() -> Self {
        PerformanceFunction::PowerLaw { gamma: T::lit(0.5) }
    }
}

impl<T: Scalar> PerformanceFunction<T> {
    pub fn power_law(gamma: T) -> Result<Self> {
        let f = PerformanceFunction::PowerLaw { gamma };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PerformanceFunction::PowerLaw { gamma } if !(gamma > T::zero() && gamma < T::one()) => {
                Err(Error::domain(format!(
                    "power-law exponent {gamma} outside (0,1)"
                )))
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, r: T) -> T {
        match *self {
            PerformanceFunction::PowerLaw { gamma } => {
                if r == T::zero() {
                    T::zero()
                } else {
                    r.powf(gamma)
                }
            }
            PerformanceFunction::Log1p => r.ln_1p(),
        }
    }

    /// `f'(r)` for `r > 0`.
    pub fn derivative(&self, r: T) -> T {
        match *self {
            PerformanceFunction::PowerLaw { gamma } => gamma * r.powf(gamma - T::one()),
            PerformanceFunction::Log1p => T::one() / (T::one() + r),
        }
    }
}

/// Time scales and per-member parameters of the influence and appraise
/// processes.
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceParams<T> {
    pub tau_ave: T,
    pub tau_app: T,
    /// Diagonal of the prejudice susceptibility matrix; only read by the
    /// Friedkin-Johnsen influence rule.
    pub lambda: Vec<T>,
    /// Per-member feedback sensitivities.
    pub sensitivities: Vec<T>,
}

impl<T: Scalar> InfluenceParams<T> {
    /// Unit time scales, `Λ = 0.5 I`, unit sensitivities.
    pub fn with_defaults(n: usize) -> Self {
        InfluenceParams {
            tau_ave: T::one(),
            tau_app: T::one(),
            lambda: vec![T::lit(0.5); n],
            sensitivities: vec![T::one(); n],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.tau_ave > T::zero()) || !(self.tau_app > T::zero()) {
            return Err(Error::domain("time scales must be positive"));
        }
        Error::check_dim("prejudice susceptibilities", n, self.lambda.len())?;
        Error::check_dim("feedback sensitivities", n, self.sensitivities.len())?;
        if self
            .lambda
            .iter()
            .any(|&l| !(l >= T::zero() && l <= T::one()))
        {
            return Err(Error::domain(
                "prejudice susceptibilities must lie in [0,1]",
            ));
        }
        if self.sensitivities.iter().any(|&g| !(g > T::zero())) {
            return Err(Error::domain("feedback sensitivities must be positive"));
        }
        Ok(())
    }
}

/// Individual performances `p_i = f(x_i / w_i)`.
pub fn performance<T: Scalar>(
    x: &SkillVector<T>,
    w: &[T],
    f: &PerformanceFunction<T>,
) -> Result<Vec<T>> {
    Error::check_dim("assignment", x.len(), w.len())?;
    if let Some(i) = w.iter().position(|&v| !(v > T::zero())) {
        return Err(Error::domain(format!(
            "assignment entry {i} = {} is not strictly positive",
            w[i]
        )));
    }
    Ok(performance_unchecked(x.as_slice(), w, f))
}

#[inline]
pub(crate) fn performance_unchecked<T: Scalar>(
    x: &[T],
    w: &[T],
    f: &PerformanceFunction<T>,
) -> Vec<T> {
    x.iter().zip(w).map(|(&xi, &wi)| f.eval(xi / wi)).collect()
}

/// Feedback `φ = p - M p`: each member's performance minus the part of the
/// task they observe.
pub fn feedback_signal<T: Scalar>(p: &[T], m: &ObservationMatrix<T>) -> Result<Vec<T>> {
    Error::check_dim("performance vector", m.dim(), p.len())?;
    Ok(feedback_unchecked(p, m.matrix()))
}

#[inline]
pub(crate) fn feedback_unchecked<T: Scalar>(p: &[T], m: &Matrix<T>) -> Vec<T> {
    let mp = m.mul_vec(p);
    p.iter().zip(mp).map(|(&pi, q)| pi - q).collect()
}

/// Mismatch `H₁(w) = Σ |w_i / x_i - 1|` between assignment and skills.
pub fn mismatch_h1<T: Scalar>(x: &SkillVector<T>, w: &[T]) -> T {
    x.as_slice()
        .iter()
        .zip(w)
        .fold(T::zero(), |acc, (&xi, &wi)| {
            acc + (wi / xi - T::one()).abs()
        })
}
