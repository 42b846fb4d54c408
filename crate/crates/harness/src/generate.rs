//! Seeded construction of skills, appraisals and observation networks.
//!
//! Every random ingredient has its own ChaCha stream under the run seed, so
//! changing how one ingredient is drawn never shifts another. Monte Carlo
//! replicates get their seeds from a counter-indexed stream of the master
//! seed.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use teamdyn_core::spectral::{in_degree_assignment, left_dominant_eigenvector};
use teamdyn_core::{
    AppraisalMatrix, Assignment, EigenOptions, Matrix, ModelSpec, ObservationMatrix, SkillVector,
};

use crate::config::{
    AppraisalGen, AssignmentGen, ExperimentConfig, ModelKindConfig, ObservationGen, SkillGen,
};
use crate::error::{HarnessError, Result};

const STREAM_SKILLS: u64 = 1;
const STREAM_APPRAISAL: u64 = 2;
const STREAM_OBSERVATION: u64 = 3;
const STREAM_ASSIGNMENT: u64 = 4;
/// Per-sample assignments of the random baseline.
pub(crate) const STREAM_BASELINE: u64 = 5;
const STREAM_SUBSEEDS: u64 = 6;

/// Rejection sampling gives up after this many draws.
const MAX_REDRAWS: usize = 100_000;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of replicate `k` under `master`: the `k`-th 64-bit word of a
/// dedicated stream, read by seeking rather than by drawing in order.
pub fn sub_seed(master: u64, k: u64) -> u64 {
    let mut rng = rng_for(master, STREAM_SUBSEEDS);
    rng.set_word_pos(u128::from(k) * 2);
    rng.next_u64()
}

/// A point drawn uniformly from the open simplex.
pub fn uniform_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 && raw.iter().all(|&v| v > 0.0) {
            return raw.into_iter().map(|v| v / total).collect();
        }
    }
}

fn simplex_with_floor<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> Result<Vec<f64>> {
    for _ in 0..MAX_REDRAWS {
        let v = uniform_simplex(rng, n);
        if v.iter().all(|&e| e >= floor) {
            return Ok(v);
        }
    }
    Err(HarnessError::Config(format!(
        "no simplex draw with all entries >= {floor} after {MAX_REDRAWS} tries"
    )))
}

/// Row-stochastic matrix with uniform random weights on `support`.
fn weights_on<R: Rng + ?Sized>(rng: &mut R, support: &[Vec<bool>]) -> Result<Matrix> {
    let n = support.len();
    let mut rows = Vec::with_capacity(n);
    for (i, s) in support.iter().enumerate() {
        let idx: Vec<usize> = (0..n).filter(|&j| s[j]).collect();
        if idx.is_empty() {
            return Err(HarnessError::Config(format!(
                "row {i} of the support pattern is empty"
            )));
        }
        let w = uniform_simplex(rng, idx.len());
        let mut row = vec![0.0; n];
        for (&j, v) in idx.iter().zip(w) {
            row[j] = v;
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(&rows)?)
}

fn skills(cfg: &ExperimentConfig) -> Result<SkillVector> {
    let n = cfg.n;
    let x = match &cfg.skills {
        SkillGen::DirichletUniform { min_entry } => {
            simplex_with_floor(&mut rng_for(cfg.seed, STREAM_SKILLS), n, *min_entry)?
        }
        SkillGen::Explicit { values } => values.clone(),
        SkillGen::Uniform => vec![1.0 / n as f64; n],
    };
    if x.len() != n {
        return Err(HarnessError::Config(format!(
            "skills has {} entries, expected n = {n}",
            x.len()
        )));
    }
    Ok(SkillVector::new(x)?)
}

fn explicit_rows(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Matrix> {
    if rows.len() != n {
        return Err(HarnessError::Config(format!(
            "{what} has {} rows, expected n = {n}",
            rows.len()
        )));
    }
    Matrix::from_rows(rows).map_err(|e| HarnessError::Config(format!("{what}: {e}")))
}

fn initial_appraisal(cfg: &ExperimentConfig, x: &SkillVector) -> Result<AppraisalMatrix> {
    let n = cfg.n;
    let mut rng = rng_for(cfg.seed, STREAM_APPRAISAL);
    let m = match &cfg.initial_appraisal {
        AppraisalGen::DirichletRows {
            min_entry,
            self_weight,
        } => {
            let rows = (0..n)
                .map(|_| simplex_with_floor(&mut rng, n, *min_entry))
                .collect::<Result<Vec<_>>>()?;
            let d = Matrix::from_rows(&rows)?;
            let s = *self_weight;
            Matrix::from_fn(
                n,
                |i, j| if i == j { s } else { 0.0 } + (1.0 - s) * d[(i, j)],
            )
        }
        AppraisalGen::Explicit { rows } => explicit_rows(rows, n, "initial_appraisal.rows")?,
        AppraisalGen::SparsePattern { pattern, density } => {
            let support: Vec<Vec<bool>> = match pattern {
                Some(p) => {
                    if p.len() != n || p.iter().any(|r| r.len() != n) {
                        return Err(HarnessError::Config(format!(
                            "initial_appraisal.pattern must be {n} x {n}"
                        )));
                    }
                    p.iter()
                        .map(|r| r.iter().map(|&b| b != 0).collect())
                        .collect()
                }
                None => (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| i == j || rng.random_bool(*density))
                            .collect()
                    })
                    .collect(),
            };
            weights_on(&mut rng, &support)?
        }
        AppraisalGen::ConsensusOnSkills => Matrix::rank_one_rows(x.as_slice()),
    };
    AppraisalMatrix::new(m).map_err(|e| HarnessError::Config(format!("initial appraisal: {e}")))
}

/// Random cycle through all nodes, so the graph is strongly connected.
fn add_cycle<R: Rng + ?Sized>(rng: &mut R, nodes: &[usize], support: &mut [Vec<bool>]) {
    let mut order = nodes.to_vec();
    order.shuffle(rng);
    for k in 0..order.len() {
        support[order[k]][order[(k + 1) % order.len()]] = true;
    }
}

fn add_random_edges<R: Rng + ?Sized>(
    rng: &mut R,
    nodes: &[usize],
    density: f64,
    support: &mut [Vec<bool>],
) {
    for &i in nodes {
        for &j in nodes {
            if i != j && !support[i][j] && rng.random_bool(density) {
                support[i][j] = true;
            }
        }
    }
}

fn observation(cfg: &ExperimentConfig) -> Result<ObservationMatrix> {
    let n = cfg.n;
    let mut rng = rng_for(cfg.seed, STREAM_OBSERVATION);
    let all: Vec<usize> = (0..n).collect();
    let mut support = vec![vec![false; n]; n];
    let m = match &cfg.observation {
        ObservationGen::Explicit { rows } => explicit_rows(rows, n, "observation.rows")?,
        ObservationGen::Uniform => Matrix::from_fn(n, |_, _| 1.0 / n as f64),
        ObservationGen::StronglyConnectedRandom { density } => {
            add_cycle(&mut rng, &all, &mut support);
            add_random_edges(&mut rng, &all, *density, &mut support);
            weights_on(&mut rng, &support)?
        }
        ObservationGen::SingleSinkRandom { density } => {
            let mut order = all.clone();
            order.shuffle(&mut rng);
            let sink = order[0];
            support[sink][sink] = true;
            for k in 1..n {
                let parent = order[rng.random_range(0..k)];
                support[order[k]][parent] = true;
                for &earlier in &order[..k] {
                    if rng.random_bool(*density) {
                        support[order[k]][earlier] = true;
                    }
                }
            }
            weights_on(&mut rng, &support)?
        }
        ObservationGen::SourceSinkComponents { density } => {
            let mut order = all.clone();
            order.shuffle(&mut rng);
            let (source, sink) = order.split_at(n / 2);
            for group in [source, sink] {
                add_cycle(&mut rng, group, &mut support);
                add_random_edges(&mut rng, group, *density, &mut support);
            }
            let from = source[rng.random_range(0..source.len())];
            let to = sink[rng.random_range(0..sink.len())];
            support[from][to] = true;
            for &i in source {
                for &j in sink {
                    if rng.random_bool(*density) {
                        support[i][j] = true;
                    }
                }
            }
            weights_on(&mut rng, &support)?
        }
        ObservationGen::DisconnectedComponents {
            components,
            density,
        } => {
            let mut order = all.clone();
            order.shuffle(&mut rng);
            let base = n / components;
            let extra = n % components;
            let mut start = 0;
            for c in 0..*components {
                let len = base + usize::from(c < extra);
                let group = &order[start..start + len];
                add_cycle(&mut rng, group, &mut support);
                add_random_edges(&mut rng, group, *density, &mut support);
                start += len;
            }
            weights_on(&mut rng, &support)?
        }
    };
    ObservationMatrix::new(m).map_err(|e| HarnessError::Config(format!("observation matrix: {e}")))
}

fn manager_assignment(cfg: &ExperimentConfig) -> Result<Assignment> {
    let n = cfg.n;
    let w = match &cfg.initial_assignment {
        AssignmentGen::DirichletUniform => {
            uniform_simplex(&mut rng_for(cfg.seed, STREAM_ASSIGNMENT), n)
        }
        AssignmentGen::Explicit { values } => values.clone(),
        AssignmentGen::Uniform => vec![1.0 / n as f64; n],
    };
    if w.len() != n {
        return Err(HarnessError::Config(format!(
            "initial_assignment has {} entries, expected n = {n}",
            w.len()
        )));
    }
    if w.iter().any(|&v| !(v > 0.0)) {
        return Err(HarnessError::Config(
            "Theorem 1 hypothesis: initial assignment must be interior".into(),
        ));
    }
    Ok(Assignment::new(w)?)
}

/// Everything a run needs, drawn from a config.
#[derive(Clone, Debug)]
pub struct Instance {
    pub x: SkillVector,
    pub m: ObservationMatrix,
    /// Absent for the manager model.
    pub a0: Option<AppraisalMatrix>,
    /// Given for the manager model; otherwise implied by `a0` when the
    /// assignment rule is defined there.
    pub w0: Option<Assignment>,
    pub spec: ModelSpec,
}

impl Instance {
    pub fn build(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n;
        let x = skills(cfg)?;
        let m = observation(cfg)?;
        let f = cfg.model.performance.build()?;
        let params = cfg.model.params(n)?;
        let rule = cfg.model.assignment_rule();
        let (a0, w0, spec) = match cfg.model.kind {
            ModelKindConfig::Manager => (
                None,
                Some(manager_assignment(cfg)?),
                ModelSpec::manager(n, f),
            ),
            kind => {
                let a0 = initial_appraisal(cfg, &x)?;
                let w0 = match rule {
                    teamdyn_core::AssignmentRule::Eigenvector => {
                        left_dominant_eigenvector(&a0, &EigenOptions::default(), None).ok()
                    }
                    teamdyn_core::AssignmentRule::InDegree => Some(in_degree_assignment(&a0)?),
                };
                let mut spec = match kind {
                    ModelKindConfig::AssignAppraiseInfluence => {
                        ModelSpec::assign_appraise_influence(m.clone(), f, params)
                    }
                    _ => {
                        let mut s = ModelSpec::assign_appraise(m.clone(), f);
                        s.params = params;
                        s
                    }
                }
                .with_assignment_rule(rule);
                if cfg.model.influence_rule() == teamdyn_core::InfluenceRule::FriedkinJohnsen {
                    spec = spec.with_prejudice(a0.matrix().clone());
                }
                (Some(a0), w0, spec)
            }
        };
        Ok(Instance { x, m, a0, w0, spec })
    }
}
