//! Transactive-memory and convergence metrics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::team::SkillVector;

/// Largest column spread `max_j (max_k a_kj - min_k a_kj)`; zero exactly at
/// appraisal consensus.
pub fn appraisal_consensus_spread<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.dim();
    (0..n)
        .map(|j| {
            let (lo, hi) = (0..n).fold((T::infinity(), T::neg_infinity()), |(lo, hi), k| {
                (lo.min(a[(k, j)]), hi.max(a[(k, j)]))
            });
            hi - lo
        })
        .fold(T::zero(), |m, v| m.max(v))
}

/// Unweighted digraph with `(i, j)` present iff `i` rates `j` at least as
/// highly as themself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparativeAppraisalGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl ComparativeAppraisalGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }
}

pub fn comparative_graph<T: Scalar>(a: &Matrix<T>) -> ComparativeAppraisalGraph {
    let n = a.dim();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] >= a[(i, i)] {
                edges.insert((i, j));
            }
        }
    }
    ComparativeAppraisalGraph { n, edges }
}

/// Number of unordered node triples containing a 2-path `u → v → z` whose
/// closing edge `u → z` is absent.
pub fn nontransitive_triad_count(g: &ComparativeAppraisalGraph) -> Result<usize> {
    let n = g.n;
    if n < 3 {
        return Err(Error::domain(format!(
            "triads need at least 3 nodes, got {n}"
        )));
    }
    let mut adj = vec![false; n * n];
    for &(i, j) in &g.edges {
        adj[i * n + j] = true;
    }
    let e = |u: usize, v: usize| adj[u * n + v];
    let violates = |u, v, z| e(u, v) && e(v, z) && !e(u, z);
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let bad = [
                    (i, j, k),
                    (i, k, j),
                    (j, i, k),
                    (j, k, i),
                    (k, i, j),
                    (k, j, i),
                ]
                .into_iter()
                .any(|(u, v, z)| violates(u, v, z));
                if bad {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn check_interior<T: Scalar>(w: &[T], x: &SkillVector<T>) -> Result<()> {
    Error::check_dim("assignment", x.len(), w.len())?;
    if w.iter().any(|&v| !(v > T::zero())) {
        return Err(Error::domain(
            "Lyapunov function undefined on the simplex boundary",
        ));
    }
    Ok(())
}

/// `V(w) = -Σ x_i ln(w_i / x_i)`, the Kullback-Leibler divergence of `w`
/// from `x`.
pub fn lyapunov_manager<T: Scalar>(w: &[T], x: &SkillVector<T>) -> Result<T> {
    check_interior(w, x)?;
    Ok(x.as_slice()
        .iter()
        .zip(w)
        .fold(T::zero(), |acc, (&xi, &wi)| acc - xi * (wi / xi).ln()))
}

/// `V(w) = ln(max_k x_k/w_k / min_k x_k/w_k)`.
pub fn lyapunov_ratio<T: Scalar>(w: &[T], x: &SkillVector<T>) -> Result<T> {
    check_interior(w, x)?;
    let (lo, hi) = x
        .as_slice()
        .iter()
        .zip(w)
        .map(|(&xi, &wi)| xi / wi)
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        });
    Ok((hi / lo).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn graph(n: usize, edges: &[(usize, usize)]) -> ComparativeAppraisalGraph {
        ComparativeAppraisalGraph {
            n,
            edges: edges.iter().copied().collect(),
        }
    }

    #[test]
    fn spread_examples() {
        let consensus = Matrix::rank_one_rows(&[0.2, 0.3, 0.5]);
        assert_eq!(appraisal_consensus_spread(&consensus), 0.0);
        assert_eq!(appraisal_consensus_spread(&Matrix::<f64>::identity(2)), 1.0);
        let a = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        assert_eq!(appraisal_consensus_spread(&a), 0.25);
    }

    #[test]
    fn comparative_graph_examples() {
        let a = Matrix::from_rows(&[vec![0.6, 0.4], vec![0.5, 0.5]]).unwrap();
        assert_eq!(comparative_graph(&a).edges, BTreeSet::from([(1, 0)]));

        let uniform = Matrix::from_fn(4, |_, _| 0.25);
        assert_eq!(comparative_graph(&uniform).edges.len(), 12);

        let x = [0.1, 0.4, 0.2, 0.3];
        let g = comparative_graph(&Matrix::rank_one_rows(&x));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.has_edge(i, j), i != j && x[j] >= x[i]);
            }
        }
        assert_eq!(nontransitive_triad_count(&g).unwrap(), 0);
    }

    #[test]
    fn triad_examples() {
        assert_eq!(
            nontransitive_triad_count(&graph(3, &[(0, 1), (1, 2), (2, 0)])).unwrap(),
            1
        );
        assert_eq!(
            nontransitive_triad_count(&graph(3, &[(0, 1), (0, 2), (1, 2)])).unwrap(),
            0
        );
        let complete: Vec<_> = (0..5)
            .flat_map(|i| (0..5).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        assert_eq!(nontransitive_triad_count(&graph(5, &complete)).unwrap(), 0);
        assert!(nontransitive_triad_count(&graph(2, &[(0, 1)])).is_err());
    }

    #[test]
    fn lyapunov_examples() {
        let x = SkillVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(lyapunov_manager(&[0.5, 0.5], &x).unwrap(), 0.0);
        assert_eq!(lyapunov_ratio(&[0.5, 0.5], &x).unwrap(), 0.0);
        assert_abs_diff_eq!(
            lyapunov_ratio(&[0.25, 0.75], &x).unwrap(),
            3f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            lyapunov_manager(&[0.25, 0.75], &x).unwrap(),
            0.143_841_036_225_890_45,
            epsilon = 1e-15
        );
        assert!(lyapunov_manager(&[0.0, 1.0], &x).is_err());
        assert!(lyapunov_ratio(&[1.0, 0.0], &x).is_err());
    }
}
