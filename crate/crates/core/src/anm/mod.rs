//! Linear additive noise models `X = WᵀX + N`: parameter sampling and data generation.

mod analytic;
mod dataset;

pub use analytic::{
    analytic_covariance, chain_terminal_variance, chain_variance_lower_bound, expected_log_abs_weight,
    solve_alpha_for_target, total_effects,
};
pub use dataset::Dataset;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Dag;

/// `Unif((-hi, -lo) ∪ (lo, hi))`; `lo == hi` gives `±lo` with a random sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightDistRaw")]
pub struct WeightDist {
    lo: f64,
    hi: f64,
}

#[derive(Deserialize)]
struct WeightDistRaw {
    lo: f64,
    hi: f64,
}

impl TryFrom<WeightDistRaw> for WeightDist {
    type Error = Error;
    fn try_from(raw: WeightDistRaw) -> Result<Self> {
        WeightDist::new(raw.lo, raw.hi)
    }
}

impl WeightDist {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::invalid(format!("weight bounds need 0 < lo ≤ hi, got lo={lo}, hi={hi}")));
        }
        Ok(WeightDist { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let magnitude = if self.lo == self.hi { self.lo } else { rng.random_range(self.lo..self.hi) };
        if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        }
    }
}

/// Noise family parameterized by its standard deviation φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFamily {
    /// `N(0, φ²)`
    Gaussian,
    /// `Unif(-√3 φ, √3 φ)`
    Uniform,
}

impl NoiseFamily {
    pub fn sample<R: Rng + ?Sized>(&self, sd: f64, rng: &mut R) -> f64 {
        match self {
            NoiseFamily::Gaussian => sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng),
            NoiseFamily::Uniform => {
                let half = 3f64.sqrt() * sd;
                rng.random_range(-half..half)
            }
        }
    }
}

/// Distribution of the per-node noise standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SigmaDist {
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Exponential with the given rate (mean `1 / rate`).
    Exponential {
        rate: f64,
    },
}

impl SigmaDist {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SigmaDist::Uniform { lo, hi } if lo > 0.0 && lo <= hi && hi.is_finite() => Ok(()),
            SigmaDist::Exponential { rate } if rate > 0.0 && rate.is_finite() => Ok(()),
            other => Err(Error::invalid(format!("invalid noise scale distribution {other:?}"))),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            SigmaDist::Uniform { lo, hi } if lo == hi => lo,
            SigmaDist::Uniform { lo, hi } => rng.random_range(lo..hi),
            SigmaDist::Exponential { rate } => loop {
                // an exact zero would make the node deterministic
                let s: f64 = Exp::new(rate).expect("validated rate").sample(rng);
                if s > 0.0 {
                    break s;
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub family: NoiseFamily,
    pub sigma: SigmaDist,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec { family: NoiseFamily::Gaussian, sigma: SigmaDist::Uniform { lo: 0.5, hi: 2.0 } }
    }
}

/// A fully parameterized linear ANM.
#[derive(Debug, Clone, PartialEq)]
pub struct AnmInstance {
    dag: Dag,
    weights: DMatrix<f64>,
    sigma: Vec<f64>,
    family: NoiseFamily,
}

impl AnmInstance {
    /// `weights[(s, t)]` is the coefficient of `X_s` in the equation of `X_t`.
    pub fn new(dag: Dag, weights: DMatrix<f64>, sigma: Vec<f64>, family: NoiseFamily) -> Result<Self> {
        let d = dag.d();
        if weights.nrows() != d || weights.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: weights.nrows() });
        }
        if sigma.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: sigma.len() });
        }
        for s in 0..d {
            for t in 0..d {
                let w = weights[(s, t)];
                if !w.is_finite() {
                    return Err(Error::invalid(format!("weight ({s}, {t}) is not finite")));
                }
                if w != 0.0 && !dag.has_edge(s, t) {
                    return Err(Error::invalid(format!("nonzero weight on non-edge ({s}, {t})")));
                }
            }
        }
        if let Some(bad) = sigma.iter().position(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::invalid(format!("noise standard deviation of node {bad} must be positive")));
        }
        Ok(AnmInstance { dag, weights, sigma, family })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn d(&self) -> usize {
        self.dag.d()
    }
}

/// Draws edge weights iid from `wdist` on the edges of `g` and one noise
/// standard deviation per node.
///
/// Weights are drawn for edges in lexicographic order before any noise scale.
pub fn sample_instance<R: Rng + ?Sized>(
    g: &Dag,
    wdist: &WeightDist,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<AnmInstance> {
    noise.sigma.validate()?;
    let d = g.d();
    let mut weights = DMatrix::zeros(d, d);
    for (s, t) in g.edges() {
        weights[(s, t)] = wdist.sample(rng);
    }
    let sigma = (0..d).map(|_| noise.sigma.sample(rng)).collect();
    AnmInstance::new(g.clone(), weights, sigma, noise.family)
}

/// `n` iid observations, propagated node by node in topological order.
pub fn sample_data<R: Rng + ?Sized>(inst: &AnmInstance, n: usize, rng: &mut R) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 observations, got {n}")));
    }
    let d = inst.d();
    let mut values = DMatrix::zeros(n, d);
    for t in inst.dag.topological_order() {
        let sd = inst.sigma[t];
        for row in 0..n {
            let mut x = inst.family.sample(sd, rng);
            for &p in inst.dag.parents(t) {
                x += inst.weights[(p, t)] * values[(row, p)];
            }
            values[(row, t)] = x;
        }
    }
    Dataset::new(values, None)
}
