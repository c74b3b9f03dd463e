//! τ-sortability: how well a per-node score `τ` increases along the causal order.
//!
//! For every directed path `s → … → t` counted by the chosen weighting, the
//! pair scores 1 if `τ(s) < τ(t)`, ½ on a tie and 0 otherwise; the
//! sortability is the weighted mean score. Weightings differ in how a cause
//! effect pair is counted:
//!
//! * [`Weighting::UniqueLength`]: once per distinct path length joining the pair.
//! * [`Weighting::PathExistence`]: once per connected pair.
//! * [`Weighting::PathCount`]: once per directed path.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::anm::Dataset;
use crate::error::{Error, Result};
use crate::graphs::{Dag, PathCount, PathLengthIndex};
use crate::regression::{r_squared, r_squared_each_on_rest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    UniqueLength,
    PathExistence,
    PathCount,
}

impl Weighting {
    pub const ALL: [Weighting; 3] = [Weighting::UniqueLength, Weighting::PathExistence, Weighting::PathCount];

    pub fn name(self) -> &'static str {
        match self {
            Weighting::UniqueLength => "unique_length",
            Weighting::PathExistence => "path_existence",
            Weighting::PathCount => "path_count",
        }
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Weighting::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown weighting {s:?}")))
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which per-node score the report was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Var,
    R2,
    Cev,
    Custom,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Var => "var",
            Criterion::R2 => "r2",
            Criterion::Cev => "cev",
            Criterion::Custom => "custom",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Criterion::Var, Criterion::R2, Criterion::Cev, Criterion::Custom]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown criterion {s:?}")))
    }
}

/// Serialized as `{criterion, weighting, value, ties, tau}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortabilityReport {
    pub criterion: Criterion,
    pub weighting: Weighting,
    pub value: f64,
    /// Number of counted `(pair, length)` terms that scored ½.
    pub ties: u64,
    pub tau: Vec<f64>,
    /// Exact value as `half_numerator / (2 · denominator)`.
    #[serde(skip)]
    pub half_numerator: u128,
    #[serde(skip)]
    pub denominator: u128,
}

impl SortabilityReport {
    /// Exact value as a reduced fraction `(numerator, denominator)`.
    pub fn fraction(&self) -> (u128, u128) {
        let (num, den) = (self.half_numerator, 2 * self.denominator);
        let g = gcd(num, den).max(1);
        (num / g, den / g)
    }

    pub fn with_criterion(mut self, criterion: Criterion) -> Self {
        self.criterion = criterion;
        self
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Score in half-units: 2 if increasing, 1 on a tie, 0 if decreasing.
fn incr_halves(a: f64, b: f64, tie_tolerance: f64) -> u128 {
    if (a - b).abs() <= tie_tolerance {
        1
    } else if a < b {
        2
    } else {
        0
    }
}

/// Sortability of `tau` with respect to `g`, exact ties only.
pub fn sortability(tau: &[f64], g: &Dag, weighting: Weighting) -> Result<SortabilityReport> {
    sortability_with_index(tau, &PathLengthIndex::new(g), weighting, 0.0)
}

/// Sortability with a precomputed path index and a tie tolerance:
/// `|τ(s) − τ(t)| ≤ tie_tolerance` scores ½.
pub fn sortability_with_index(
    tau: &[f64],
    index: &PathLengthIndex,
    weighting: Weighting,
    tie_tolerance: f64,
) -> Result<SortabilityReport> {
    if tau.len() != index.d() {
        return Err(Error::DimensionMismatch { expected: index.d(), found: tau.len() });
    }
    if tau.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("criterion values must be finite"));
    }
    if !(tie_tolerance >= 0.0) {
        return Err(Error::invalid("tie tolerance must be nonnegative"));
    }
    let mut half_numerator: u128 = 0;
    let mut denominator: u128 = 0;
    let mut ties = 0u64;
    let mut term = |s: usize, t: usize, mult: u128| {
        let score = incr_halves(tau[s], tau[t], tie_tolerance);
        if score == 1 {
            ties += 1;
        }
        half_numerator += score * mult;
        denominator += mult;
    };
    match weighting {
        Weighting::UniqueLength => {
            for (_, level) in index.levels() {
                for &(s, t, _) in level {
                    term(s, t, 1);
                }
            }
        }
        Weighting::PathExistence => {
            for (s, t) in index.connected_pairs() {
                term(s, t, 1);
            }
        }
        Weighting::PathCount => {
            for (_, level) in index.levels() {
                for &(s, t, c) in level {
                    match c {
                        PathCount::Exact(m) => term(s, t, m),
                        PathCount::Saturated => {
                            return Err(Error::PathCountOverflow { source_node: s, target_node: t })
                        }
                    }
                }
            }
        }
    }
    if denominator == 0 {
        return Err(Error::UndefinedSortability);
    }
    Ok(SortabilityReport {
        criterion: Criterion::Custom,
        weighting,
        value: half_numerator as f64 / (2.0 * denominator as f64),
        ties,
        tau: tau.to_vec(),
        half_numerator,
        denominator,
    })
}

/// Empirical variance of every column.
pub fn var_criterion(data: &Dataset) -> Vec<f64> {
    data.variances()
}

/// R² of every column regressed on all other columns.
pub fn r2_criterion(data: &Dataset) -> Result<Vec<f64>> {
    if data.d() >= 2 && data.n() <= data.d() {
        return Err(Error::invalid(format!(
            "R² criterion needs more observations ({}) than variables ({})",
            data.n(),
            data.d()
        )));
    }
    r_squared_each_on_rest(data)
}

/// R² of every column regressed on its parents in `g` (0 for roots).
pub fn cev_criterion(data: &Dataset, g: &Dag) -> Result<Vec<f64>> {
    if g.d() != data.d() {
        return Err(Error::DimensionMismatch { expected: data.d(), found: g.d() });
    }
    (0..g.d()).map(|t| if g.parents(t).is_empty() { Ok(0.0) } else { r_squared(data, t, g.parents(t)) }).collect()
}

/// Population R² of each variable given all others, `1 − 1 / (Σ⁻¹)_tt`.
pub fn analytic_r2_from_covariance(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let d = cov.nrows();
    if cov.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: cov.ncols() });
    }
    let chol = cov.clone().cholesky().ok_or_else(|| Error::invalid("covariance is not positive definite"))?;
    let inv = chol.inverse();
    Ok((0..d)
        .map(|t| {
            let precision = inv[(t, t)] * cov[(t, t)];
            1.0 - 1.0 / precision
        })
        .collect())
}
