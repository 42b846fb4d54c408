//! Perron vectors of appraisal matrices and the connectivity classifiers
//! that decide which convergence results apply to a team.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::{sum, Matrix};
use crate::scalar::Scalar;
use crate::team::{AppraisalMatrix, Assignment};

/// Stopping rule for power iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenOptions<T> {
    /// Bound on `‖wᵀA - wᵀ‖∞` at the returned vector.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for EigenOptions<T> {
    fn default() -> Self {
        EigenOptions {
            tol: T::tol(1e-12),
            max_iter: 100_000,
        }
    }
}

/// Left eigenvector of eigenvalue one of an irreducible row-stochastic
/// matrix, normalized onto the simplex.
///
/// Solves `wᵀ(I - A) = 0`, `Σw = 1` directly and polishes the result with
/// power iteration on `((A + I) / 2)ᵀ`, which has the same Perron vector as
/// `A` but is aperiodic, so periodic structures such as a directed cycle
/// still converge. If the direct solve breaks down, the iteration starts
/// from `warm_start` when given and from the uniform vector otherwise.
pub fn left_dominant_eigenvector<T: Scalar>(
    a: &AppraisalMatrix<T>,
    opts: &EigenOptions<T>,
    warm_start: Option<&Assignment<T>>,
) -> Result<Assignment<T>> {
    let report = classify_connectivity(a.matrix())?;
    if !report.irreducible {
        return Err(Error::EigenvectorUndefined(
            "appraisal matrix is reducible".into(),
        ));
    }
    let w = perron_left(a.matrix(), opts, warm_start.map(|w| w.as_slice()))?;
    Ok(Assignment::new_unchecked(w))
}

/// Power-iteration core of [`left_dominant_eigenvector`] without the
/// irreducibility check. Used on integrator stage values, where the check
/// would dominate the cost and irreducibility is inherited from the run's
/// initial condition.
pub fn perron_left<T: Scalar>(
    a: &Matrix<T>,
    opts: &EigenOptions<T>,
    warm_start: Option<&[T]>,
) -> Result<Vec<T>> {
    let n = a.dim();
    let half = T::lit(0.5);
    if let Some(w) = warm_start {
        Error::check_dim("warm start", n, w.len())?;
    }
    let mut v = match (direct_left(a), warm_start) {
        (Some(v), _) => v,
        (None, Some(w)) => w.to_vec(),
        (None, None) => vec![T::one() / T::from_usize_lossy(n); n],
    };
    normalize(&mut v);
    let mut residual = T::infinity();
    for _ in 0..=opts.max_iter {
        let y = a.left_mul_vec(&v);
        residual = y
            .iter()
            .zip(&v)
            .fold(T::zero(), |m, (&yi, &vi)| m.max((yi - vi).abs()));
        if residual <= opts.tol {
            if v.iter().any(|&x| !(x > T::zero())) {
                return Err(Error::EigenvectorUndefined(
                    "Perron vector has a non-positive entry".into(),
                ));
            }
            return Ok(v);
        }
        for (vi, yi) in v.iter_mut().zip(y) {
            *vi = half * (*vi + yi);
        }
        normalize(&mut v);
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual: residual.to_f64_lossy(),
    })
}

/// Gaussian elimination with partial pivoting on `(I - A)ᵀ` with its last
/// row replaced by the normalization. `None` on a vanishing pivot or a
/// non-finite result.
fn direct_left<T: Scalar>(a: &Matrix<T>) -> Option<Vec<T>> {
    let n = a.dim();
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j { T::one() } else { T::zero() };
                    id - a[(j, i)]
                })
                .collect()
        })
        .collect();
    let mut rhs = vec![T::zero(); n];
    m[n - 1] = vec![T::one(); n];
    rhs[n - 1] = T::one();
    let tiny = T::epsilon() * T::from_usize_lossy(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(m[piv][col].abs() > tiny) {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor != T::zero() {
                let (top, bottom) = m.split_at_mut(r);
                for (dst, &src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *dst -= factor * src;
                }
                let v = rhs[col];
                rhs[r] -= factor * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let tail = (i + 1..n).fold(T::zero(), |acc, k| acc + m[i][k] * x[k]);
        x[i] = (rhs[i] - tail) / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn normalize<T: Scalar>(v: &mut [T]) {
    let s = sum(v);
    for x in v.iter_mut() {
        *x /= s;
    }
}

/// Workload passing `q(k+1) = Aᵀ q(k)` from the uniform split.
///
/// For primitive `A` this converges to the Perron vector, which makes it an
/// independent check on [`left_dominant_eigenvector`].
pub fn workload_diffusion<T: Scalar>(a: &AppraisalMatrix<T>, steps: usize) -> Assignment<T> {
    let n = a.dim();
    let mut q = vec![T::one() / T::from_usize_lossy(n); n];
    for _ in 0..steps {
        q = a.matrix().left_mul_vec(&q);
    }
    Assignment::new_unchecked(q)
}

/// Normalized in-degree centrality `Aᵀ1 / 1ᵀA1`.
pub fn in_degree_assignment<T: Scalar>(a: &AppraisalMatrix<T>) -> Result<Assignment<T>> {
    in_degree_raw(a.matrix()).map(Assignment::new_unchecked)
}

pub(crate) fn in_degree_raw<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    let cols = a.col_sums();
    let total = sum(&cols);
    if !(total > T::zero()) {
        return Err(Error::domain("in-degree of an all-zero matrix"));
    }
    Ok(cols.into_iter().map(|c| c / total).collect())
}

/// Graph-theoretic properties of the digraph with an edge `i → j` whenever
/// `b_ij > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub irreducible: bool,
    pub primitive: bool,
    pub strongly_connected: bool,
    pub has_globally_reachable_node: bool,
    pub globally_reachable_nodes: BTreeSet<usize>,
    pub positive_diagonal: bool,
}

pub fn classify_connectivity<T: Scalar>(b: &Matrix<T>) -> Result<ConnectivityReport> {
    let n = b.dim();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let v = b[(i, j)];
            if v < T::zero() || v.is_nan() {
                return Err(Error::domain(format!("entry ({i},{j}) = {v} is negative")));
            }
            if v > T::zero() {
                adj[i].push(j);
            }
        }
    }
    let positive_diagonal = (0..n).all(|i| b[(i, i)] > T::zero());
    let comp = strongly_connected_components(&adj);
    let n_comp = comp.iter().copied().max().map_or(0, |c| c + 1);

    let mut is_sink = vec![true; n_comp];
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            if comp[u] != comp[v] {
                is_sink[comp[u]] = false;
            }
        }
    }
    let sinks: Vec<usize> = (0..n_comp).filter(|&c| is_sink[c]).collect();
    let globally_reachable_nodes: BTreeSet<usize> = if sinks.len() == 1 {
        (0..n).filter(|&v| comp[v] == sinks[0]).collect()
    } else {
        BTreeSet::new()
    };

    let strongly_connected = n > 0 && n_comp == 1;
    let primitive = strongly_connected && period(&adj) == 1;
    Ok(ConnectivityReport {
        irreducible: strongly_connected,
        primitive,
        strongly_connected,
        has_globally_reachable_node: !globally_reachable_nodes.is_empty(),
        globally_reachable_nodes,
        positive_diagonal,
    })
}

/// Tarjan's algorithm, iterative. Returns the component id of every node.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, position in its adjacency list)
        let mut call = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if *pos < adj[u].len() {
                let v = adj[u][*pos];
                *pos += 1;
                if index[v] == UNSEEN {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Gcd of cycle lengths of a strongly connected digraph, from BFS levels:
/// every edge `u → v` contributes `level(u) + 1 - level(v)`.
fn period(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            let d = (level[u] + 1).abs_diff(level[v]);
            g = gcd(g, d);
        }
    }
    g
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
