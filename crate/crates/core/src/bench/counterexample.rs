use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::anm::{analytic_covariance, AnmInstance, NoiseFamily};
use crate::error::Result;
use crate::graphs::{Dag, PathLengthIndex};
use crate::sortability::{
    analytic_r2_from_covariance, sortability_with_index, Criterion, SortabilityReport, Weighting,
};

/// Tolerance under which two analytic R² values count as tied; the first two
/// are equal in exact arithmetic but not after rounding.
const TIE_TOLERANCE: f64 = 1e-12;

/// Off-diagonal covariance entries of the unit-variance, half-CEV four-node model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl CounterexampleConstants {
    pub fn new() -> Self {
        let s2 = std::f64::consts::SQRT_2;
        let alpha = 1.0 / s2;
        let d3 = (4.0 + 2.0 * s2).sqrt();
        let beta = (1.0 + alpha) / d3;
        let d4 = (6.0 + 4.0 * alpha + 8.0 * beta).sqrt();
        let gamma = (1.0 + alpha) * (1.0 + 1.0 / d3) / d4;
        let delta = (1.0 + (2.0 + s2) / d3) / d4;
        CounterexampleConstants { alpha, beta, gamma, delta }
    }

    /// `Σ` written out from the closed-form entries.
    pub fn covariance(&self) -> DMatrix<f64> {
        let CounterexampleConstants { alpha: a, beta: b, gamma: g, delta: d } = *self;
        DMatrix::from_row_slice(4, 4, &[1.0, a, b, g, a, 1.0, b, g, b, b, 1.0, d, g, g, d, 1.0])
    }
}

impl Default for CounterexampleConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// `X₀ → X₁`, `{X₀, X₁} → X₂`, `{X₀, X₁, X₂} → X₃` with every non-root node
/// at unit variance and half of it explained by its parents.
pub fn counterexample_instance() -> AnmInstance {
    let k = CounterexampleConstants::new();
    let s2 = std::f64::consts::SQRT_2;
    let w3 = 1.0 / (4.0 + 2.0 * s2).sqrt();
    let w4 = 1.0 / (6.0 + 4.0 * k.alpha + 8.0 * k.beta).sqrt();
    let edges = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];
    let g = Dag::from_edges(4, &edges).expect("acyclic by construction");
    let mut w = DMatrix::zeros(4, 4);
    w[(0, 1)] = 1.0 / s2;
    w[(0, 2)] = w3;
    w[(1, 2)] = w3;
    w[(0, 3)] = w4;
    w[(1, 3)] = w4;
    w[(2, 3)] = w4;
    let half = 1.0 / s2;
    AnmInstance::new(g, w, vec![1.0, half, half, half], NoiseFamily::Gaussian).expect("valid by construction")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionEntry {
    pub weighting: Weighting,
    /// Reduced fraction such as `1/22`.
    pub exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub constants: CounterexampleConstants,
    /// Row-major `Σ` propagated from the model.
    pub covariance: Vec<Vec<f64>>,
    pub precision: Vec<Vec<f64>>,
    /// Largest entrywise gap between the propagated and closed-form `Σ`.
    pub closed_form_gap: f64,
    pub r2: Vec<f64>,
    pub cev: Vec<f64>,
    pub sortability: Vec<SortabilityReport>,
    pub fractions: Vec<FractionEntry>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Analytic covariance, precision, R², CEV and R²-sortability of the model.
pub fn counterexample_report() -> Result<CounterexampleReport> {
    let inst = counterexample_instance();
    let constants = CounterexampleConstants::new();
    let cov = analytic_covariance(&inst);
    let closed_form_gap = (&cov - constants.covariance()).amax();
    let precision = cov.clone().cholesky().expect("positive definite").inverse();
    let r2 = analytic_r2_from_covariance(&cov)?;
    let cev = (0..4).map(|t| if t == 0 { 0.0 } else { 1.0 - inst.sigma()[t].powi(2) / cov[(t, t)] }).collect();
    let index = PathLengthIndex::new(inst.dag());
    let mut sortability = Vec::new();
    let mut fractions = Vec::new();
    for w in Weighting::ALL {
        let rep = sortability_with_index(&r2, &index, w, TIE_TOLERANCE)?.with_criterion(Criterion::R2);
        let (num, den) = rep.fraction();
        fractions.push(FractionEntry { weighting: w, exact: format!("{num}/{den}") });
        sortability.push(rep);
    }
    Ok(CounterexampleReport {
        constants,
        covariance: rows(&cov),
        precision: rows(&precision),
        closed_form_gap,
        r2,
        cev,
        sortability,
        fractions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_variances_and_half_cev() {
        let rep = counterexample_report().unwrap();
        for t in 0..4 {
            assert!((rep.covariance[t][t] - 1.0).abs() < 1e-12);
        }
        assert!(rep.closed_form_gap < 1e-12);
        for &c in &rep.cev[1..] {
            assert!((c - 0.5).abs() < 1e-12);
        }
        let k = rep.constants;
        assert!(k.alpha > k.beta && k.beta > k.gamma && k.gamma > k.delta);
    }
}
