//! Sort-and-regress causal discovery.
//!
//! Each method scores the variables, sorts them ascending by score into a
//! candidate causal order, then regresses every variable on all of its
//! predecessors in that order with an L1 penalty chosen by BIC.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::anm::Dataset;
use crate::error::{Error, Result};
use crate::graphs::{Dag, GraphFile};
use crate::regression::{lasso_path_bic_with, ols_fit, LassoOptions};
use crate::sortability::{r2_criterion, var_criterion};

/// Estimated weight matrix together with the order and scores it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightEstimate {
    /// `weights[(s, t)]` estimates the direct effect of `s` on `t`.
    pub weights: DMatrix<f64>,
    /// Candidate causal order, first element earliest.
    pub order: Vec<usize>,
    /// Per-node scores the order was sorted by.
    pub scores: Vec<f64>,
}

impl WeightEstimate {
    pub fn d(&self) -> usize {
        self.order.len()
    }

    pub fn to_graph_file(&self, eps: f64) -> GraphFile {
        let g = threshold_to_dag(self, eps);
        GraphFile::weighted(&g, |s, t| self.weights[(s, t)])
    }
}

/// How each node is regressed on its predecessors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    /// Plain least squares.
    None,
    /// L1 path with BIC-selected penalty.
    LassoBic(LassoOptions),
}

impl Default for Penalty {
    fn default() -> Self {
        Penalty::LassoBic(LassoOptions::default())
    }
}

/// Stable ascending argsort; equal scores keep index order.
pub fn argsort(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    order
}

/// Regresses `order[i]` on `order[..i]` for every `i ≥ 1`.
pub fn regress_along_order(data: &Dataset, order: &[usize], penalty: Penalty) -> Result<DMatrix<f64>> {
    let d = data.d();
    if order.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: order.len() });
    }
    let mut seen = vec![false; d];
    for &v in order {
        if v >= d || std::mem::replace(&mut seen[v], true) {
            return Err(Error::invalid("order is not a permutation of the columns"));
        }
    }
    let mut weights = DMatrix::zeros(d, d);
    for i in 1..d {
        let target = order[i];
        let preds = &order[..i];
        let x = data.columns(preds);
        let y = data.column(target);
        let fit = match penalty {
            Penalty::None => ols_fit(&x, &y)?,
            Penalty::LassoBic(opts) => lasso_path_bic_with(&x, &y, &opts)?,
        };
        for (k, &s) in preds.iter().enumerate() {
            weights[(s, target)] = fit.coefficients[k];
        }
    }
    Ok(weights)
}

/// Orders by `scores` and regresses along that order.
pub fn sort_n_regress(data: &Dataset, scores: Vec<f64>, penalty: Penalty) -> Result<WeightEstimate> {
    if scores.len() != data.d() {
        return Err(Error::DimensionMismatch { expected: data.d(), found: scores.len() });
    }
    let order = argsort(&scores);
    let weights = regress_along_order(data, &order, penalty)?;
    Ok(WeightEstimate { weights, order, scores })
}

/// Scores by R² of each variable given all others.
pub fn r2_sort_n_regress(data: &Dataset) -> Result<WeightEstimate> {
    r2_sort_n_regress_with(data, Penalty::default())
}

pub fn r2_sort_n_regress_with(data: &Dataset, penalty: Penalty) -> Result<WeightEstimate> {
    let scores = if data.d() == 1 { vec![0.0] } else { r2_criterion(data)? };
    sort_n_regress(data, scores, penalty)
}

/// Scores by empirical variance.
pub fn var_sort_n_regress(data: &Dataset) -> Result<WeightEstimate> {
    sort_n_regress(data, var_criterion(data), Penalty::default())
}

/// Uniformly random order; the scores record each node's position.
pub fn random_regress<R: Rng + ?Sized>(data: &Dataset, rng: &mut R) -> Result<WeightEstimate> {
    let mut perm: Vec<usize> = (0..data.d()).collect();
    perm.shuffle(rng);
    let mut scores = vec![0.0; data.d()];
    for (pos, &v) in perm.iter().enumerate() {
        scores[v] = pos as f64;
    }
    sort_n_regress(data, scores, Penalty::default())
}

/// Keeps `s → t` iff `|ŵ(s, t)| > eps`.
pub fn threshold_to_dag(est: &WeightEstimate, eps: f64) -> Dag {
    let d = est.d();
    let mut edges = Vec::new();
    for s in 0..d {
        for t in 0..d {
            if est.weights[(s, t)].abs() > eps {
                edges.push((s, t));
            }
        }
    }
    Dag::from_edges(d, &edges).expect("estimates follow their candidate order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;

    #[test]
    fn argsort_is_stable() {
        assert_eq!(argsort(&[0.3, 0.1, 0.3, 0.0]), vec![3, 1, 0, 2]);
    }

    #[test]
    fn single_variable_gives_empty_estimate() {
        let ds = Dataset::from_rows(3, 1, &[1.0, 2.0, 4.0]).unwrap();
        for est in [
            r2_sort_n_regress(&ds).unwrap(),
            var_sort_n_regress(&ds).unwrap(),
            random_regress(&ds, &mut rng_from_seed(1)).unwrap(),
        ] {
            assert_eq!(est.weights, DMatrix::zeros(1, 1));
            assert_eq!(est.order, vec![0]);
        }
    }

    #[test]
    fn threshold_monotone() {
        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = 0.5;
        w[(0, 2)] = -0.05;
        w[(1, 2)] = 2.0;
        let est = WeightEstimate { weights: w, order: vec![0, 1, 2], scores: vec![0.0, 1.0, 2.0] };
        assert_eq!(threshold_to_dag(&est, 0.0).edge_count(), 3);
        assert_eq!(threshold_to_dag(&est, 0.1).edge_count(), 2);
        assert_eq!(threshold_to_dag(&est, f64::INFINITY).edge_count(), 0);
    }

    #[test]
    fn regress_along_order_rejects_bad_orders() {
        let ds = Dataset::from_rows(3, 2, &[1.0, 2.0, 2.0, 1.0, 3.0, 5.0]).unwrap();
        assert!(regress_along_order(&ds, &[0, 0], Penalty::None).is_err());
        assert!(regress_along_order(&ds, &[0], Penalty::None).is_err());
    }
}
