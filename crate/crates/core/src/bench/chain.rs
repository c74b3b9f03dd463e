use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anm::{
    chain_terminal_variance, chain_variance_lower_bound, sample_data, AnmInstance, NoiseFamily, SigmaDist, WeightDist,
};
use crate::error::{Error, Result};
use crate::graphs::Dag;
use crate::seeding::{stream, Purpose};
use crate::sortability::r2_criterion;

/// Independent chains `X₀ → X₁ → … → X_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainConfig {
    /// Number of edges `p`; each chain has `p + 1` nodes.
    pub p_max: usize,
    pub replicates: usize,
    pub weights: WeightDist,
    pub sigma: SigmaDist,
    pub family: NoiseFamily,
    /// Observations per chain for the finite-sample R².
    pub n: usize,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            p_max: 50,
            replicates: 30,
            weights: WeightDist::new(0.5, 2.0).expect("valid bounds"),
            sigma: SigmaDist::Uniform { lo: 0.5, hi: 2.0 },
            family: NoiseFamily::Gaussian,
            n: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub replicate: u64,
    pub position: usize,
    /// Weight of the edge into this node; `None` at the root.
    pub weight_in: Option<f64>,
    pub sigma: f64,
    /// Exact population variance.
    pub variance: f64,
    /// Population fraction of variance explained by the parent.
    pub cev: f64,
    /// Sample R² of the node regressed on all other chain nodes.
    pub r2: f64,
    /// `σ₀² Σ ln|w|` over the edges up to this node; `None` at the root.
    pub lower_bound: Option<f64>,
}

/// Per-position variance, CEV, sample R² and variance lower bound for every chain.
pub fn chain_experiment(cfg: &ChainConfig) -> Result<Vec<ChainRecord>> {
    if cfg.p_max == 0 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    if cfg.replicates == 0 {
        return Err(Error::invalid("replicates must be at least 1"));
    }
    if cfg.n <= cfg.p_max + 1 {
        return Err(Error::invalid(format!("n = {} must exceed the {} chain nodes", cfg.n, cfg.p_max + 1)));
    }
    cfg.sigma.validate()?;
    let chains: Vec<Result<Vec<ChainRecord>>> =
        (0..cfg.replicates as u64).into_par_iter().map(|r| one_chain(cfg, r)).collect();
    Ok(chains.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn one_chain(cfg: &ChainConfig, replicate: u64) -> Result<Vec<ChainRecord>> {
    let p = cfg.p_max;
    let mut rng = stream(cfg.seed, replicate, Purpose::Weights);
    let weights: Vec<f64> = (0..p).map(|_| cfg.weights.sample(&mut rng)).collect();
    let sigmas: Vec<f64> = (0..=p).map(|_| cfg.sigma.sample(&mut rng)).collect();
    let variance = chain_terminal_variance(&weights, &sigmas)?;

    let mut w = DMatrix::zeros(p + 1, p + 1);
    for (k, &wk) in weights.iter().enumerate() {
        w[(k, k + 1)] = wk;
    }
    let inst = AnmInstance::new(Dag::chain(p + 1), w, sigmas.clone(), cfg.family)?;
    let data = sample_data(&inst, cfg.n, &mut stream(cfg.seed, replicate, Purpose::Data))?;
    let r2 = r2_criterion(&data)?;

    (0..=p)
        .map(|k| {
            let (weight_in, cev, lower_bound) = if k == 0 {
                (None, 0.0, None)
            } else {
                let bound = chain_variance_lower_bound(&weights[..k], sigmas[0])?;
                (Some(weights[k - 1]), 1.0 - sigmas[k] * sigmas[k] / variance[k], Some(bound))
            };
            Ok(ChainRecord {
                replicate,
                position: k,
                weight_in,
                sigma: sigmas[k],
                variance: variance[k],
                cev,
                r2: r2[k],
                lower_bound,
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Header: `replicate,position,weight_in,sigma,variance,cev,r2,lower_bound`; roots leave the optional fields empty.
pub fn write_chain_csv<W: Write>(records: &[ChainRecord], mut out: W) -> Result<()> {
    writeln!(out, "replicate,position,weight_in,sigma,variance,cev,r2,lower_bound")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.replicate,
            r.position,
            opt(r.weight_in),
            r.sigma,
            r.variance,
            r.cev,
            r.r2,
            opt(r.lower_bound)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_chain_of_one_edge() {
        let cfg = ChainConfig {
            p_max: 1,
            replicates: 1,
            weights: WeightDist::new(1.0, 1.0).unwrap(),
            sigma: SigmaDist::Uniform { lo: 1.0, hi: 1.0 },
            n: 100,
            ..Default::default()
        };
        let recs = chain_experiment(&cfg).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].variance, 2.0);
        assert_eq!(recs[1].cev, 0.5);
        assert_eq!(recs[0].lower_bound, None);
        assert_eq!(recs[1].lower_bound, Some(0.0));
    }

    #[test]
    fn rejects_empty_chain() {
        assert!(chain_experiment(&ChainConfig { p_max: 0, ..Default::default() }).is_err());
    }
}
