//! Distances between a true and an estimated DAG.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::anm::{analytic_covariance, total_effects, AnmInstance};
use crate::error::{Error, Result};
use crate::graphs::{d_separated, Dag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDistances {
    pub sid: usize,
    pub shd: usize,
}

pub fn distances(g_true: &Dag, g_est: &Dag) -> Result<GraphDistances> {
    Ok(GraphDistances { sid: sid(g_true, g_est)?, shd: shd(g_true, g_est)? })
}

fn check_dims(a: &Dag, b: &Dag) -> Result<()> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch { expected: a.d(), found: b.d() });
    }
    Ok(())
}

/// Structural Hamming distance: unordered node pairs whose edge status
/// (absent, `s → t`, `t → s`) differs. A reversed edge counts once.
pub fn shd(g_true: &Dag, g_est: &Dag) -> Result<usize> {
    check_dims(g_true, g_est)?;
    let d = g_true.d();
    let mut count = 0;
    for s in 0..d {
        for t in s + 1..d {
            let a = (g_true.has_edge(s, t), g_true.has_edge(t, s));
            let b = (g_est.has_edge(s, t), g_est.has_edge(t, s));
            if a != b {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Structural intervention distance.
///
/// Counts ordered pairs `(i, j)` for which adjusting for the estimated
/// parents `Z = pa_est(i)` does not give the true interventional
/// distribution of `X_j` under `do(X_i)`:
///
/// * `j ∈ Z`: the estimate claims no effect, which is right iff `j` is not a
///   descendant of `i` in the true graph.
/// * otherwise `Z` must be a valid adjustment set in the true graph: no
///   member of `Z` may descend from a node (other than `i`) on a directed
///   path `i → … → j`, and `Z` must d-separate `i` from `j` once the first
///   edges of those directed paths are removed.
pub fn sid(g_true: &Dag, g_est: &Dag) -> Result<usize> {
    check_dims(g_true, g_est)?;
    let d = g_true.d();
    let desc: Vec<Vec<bool>> = (0..d).map(|v| g_true.reach_mask(v, |u| g_true.children(u))).collect();
    let anc: Vec<Vec<bool>> = (0..d).map(|v| g_true.reach_mask(v, |u| g_true.parents(u))).collect();
    let mut wrong = 0;
    for i in 0..d {
        let z = g_est.parents(i);
        for j in (0..d).filter(|&j| j != i) {
            let correct = if z.contains(&j) {
                !desc[i][j]
            } else {
                // nodes other than i on directed paths i → … → j
                let on_path: Vec<usize> = (0..d).filter(|&w| w != i && desc[i][w] && anc[j][w]).collect();
                let forbidden = |v: usize| on_path.iter().any(|&w| desc[w][v]);
                if z.iter().any(|&v| forbidden(v)) {
                    false
                } else if on_path.is_empty() {
                    d_separated(g_true, i, j, z)?
                } else {
                    let pruned = g_true.filter_edges(|s, t| !(s == i && on_path.contains(&t)));
                    d_separated(&pruned, i, j, z)?
                }
            };
            if !correct {
                wrong += 1;
            }
        }
    }
    Ok(wrong)
}

/// Linear-Gaussian reference for [`sid`].
///
/// For every ordered pair, compares the population regression coefficient of
/// `X_i` when regressing `X_j` on `(X_i, pa_est(i))` (zero if `j ∈ pa_est(i)`)
/// with the true total effect of `i` on `j`, and counts pairs differing by
/// more than `tol`.
pub fn linear_sid_oracle(inst_true: &AnmInstance, g_est: &Dag, tol: f64) -> Result<usize> {
    let d = inst_true.d();
    if g_est.d() != d {
        return Err(Error::DimensionMismatch { expected: d, found: g_est.d() });
    }
    let cov = analytic_covariance(inst_true);
    let effects = total_effects(inst_true);
    let mut wrong = 0;
    for i in 0..d {
        let z = g_est.parents(i);
        let mut design: Vec<usize> = vec![i];
        design.extend_from_slice(z);
        let sub = DMatrix::from_fn(design.len(), design.len(), |a, b| cov[(design[a], design[b])]);
        let chol = sub.cholesky().ok_or_else(|| Error::invalid("singular adjustment covariance"))?;
        for j in (0..d).filter(|&j| j != i) {
            let estimated = if z.contains(&j) {
                0.0
            } else {
                let rhs = DVector::from_iterator(design.len(), design.iter().map(|&a| cov[(a, j)]));
                chol.solve(&rhs)[0]
            };
            if (estimated - effects[(i, j)]).abs() > tol {
                wrong += 1;
            }
        }
    }
    Ok(wrong)
}
