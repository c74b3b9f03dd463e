use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_replicate, GraphModel};
use crate::anm::{solve_alpha_for_target, NoiseSpec, WeightDist};
use crate::error::{Error, Result};
use crate::graphs::PathLengthIndex;
use crate::sortability::{cev_criterion, r2_criterion, sortability_with_index, var_criterion, Weighting};

/// Grid over average in-degree γ and target `E[ln|V|]`.
///
/// For each target the weight distribution is `Unif(±(inner_bound, α))`
/// with `α` solved so that `E[ln|V|]` hits the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub graph_models: Vec<GraphModel>,
    pub d: usize,
    pub gammas: Vec<f64>,
    pub targets: Vec<f64>,
    pub inner_bound: f64,
    pub noise: NoiseSpec,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub weighting: Weighting,
    pub tie_tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            graph_models: vec![GraphModel::Er, GraphModel::Sf],
            d: 50,
            gammas: vec![1.0, 2.0, 3.0, 4.0],
            targets: (0..8).map(|k| -1.0 + 0.5 * k as f64).collect(),
            inner_bound: 0.1,
            noise: NoiseSpec::default(),
            n: 1000,
            replicates: 20,
            seed: 0,
            weighting: Weighting::UniqueLength,
            tie_tolerance: 0.0,
        }
    }
}

/// Mean sortabilities of one grid cell. Ratios are between cell means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub graph_model: GraphModel,
    pub gamma: f64,
    pub target: f64,
    /// Outer weight bound achieving `target`.
    pub alpha: f64,
    pub mean_edges: f64,
    pub v_r2: f64,
    /// On the raw data.
    pub v_var: f64,
    pub v_cev: f64,
    pub r2_over_var: f64,
    pub r2_over_cev: f64,
    pub var_over_cev: f64,
    pub count: usize,
    pub skipped: usize,
}

struct Sample {
    edges: usize,
    v_r2: f64,
    v_var: f64,
    v_cev: f64,
}

fn one_sample(cfg: &SweepConfig, model: GraphModel, gamma: f64, wdist: &WeightDist, replicate: u64) -> Result<Sample> {
    let sim = simulate_replicate(model, cfg.d, gamma, wdist, &cfg.noise, cfg.n, cfg.seed, replicate)?;
    let g = sim.instance.dag();
    let index = PathLengthIndex::new(g);
    let v = |tau: Vec<f64>| -> Result<f64> {
        Ok(sortability_with_index(&tau, &index, cfg.weighting, cfg.tie_tolerance)?.value)
    };
    let data = sim.raw.standardize()?;
    Ok(Sample {
        edges: g.edge_count(),
        v_var: v(var_criterion(&sim.raw))?,
        v_r2: v(r2_criterion(&data)?)?,
        v_cev: v(cev_criterion(&data, g)?)?,
    })
}

/// Mean sortabilities for every `(graph model, γ, target)` cell.
///
/// Replicate `r` of cell `(m, g, t)` uses stream index
/// `r + replicates · (t + |targets| · (g + |gammas| · m))`.
pub fn sweep_heatmap(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    if cfg.replicates == 0 {
        return Err(Error::invalid("replicates must be at least 1"));
    }
    if cfg.n <= cfg.d {
        return Err(Error::invalid(format!("n = {} must exceed d = {}", cfg.n, cfg.d)));
    }
    for &model in &cfg.graph_models {
        for &gamma in &cfg.gammas {
            model.validate(cfg.d, gamma)?;
        }
    }
    let alphas: Vec<f64> =
        cfg.targets.iter().map(|&t| solve_alpha_for_target(t, cfg.inner_bound)).collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (mi, &model) in cfg.graph_models.iter().enumerate() {
        for (gi, &gamma) in cfg.gammas.iter().enumerate() {
            for (ti, &alpha) in alphas.iter().enumerate() {
                jobs.push((mi, model, gi, gamma, ti, alpha));
            }
        }
    }
    let (ng, nt, reps) = (cfg.gammas.len(), cfg.targets.len(), cfg.replicates);
    jobs.into_par_iter()
        .map(|(mi, model, gi, gamma, ti, alpha)| {
            let wdist = WeightDist::new(cfg.inner_bound, alpha)?;
            let base = (reps * (ti + nt * (gi + ng * mi))) as u64;
            let mut samples = Vec::with_capacity(reps);
            let mut skipped = 0;
            for r in 0..reps as u64 {
                match one_sample(cfg, model, gamma, &wdist, base + r) {
                    Ok(s) => samples.push(s),
                    Err(e) => {
                        log::warn!(
                            "sweep {} γ={gamma} target={}: skipping replicate {r}: {e}",
                            model.name(),
                            cfg.targets[ti]
                        );
                        skipped += 1;
                    }
                }
            }
            let count = samples.len();
            let avg = |f: fn(&Sample) -> f64| samples.iter().map(f).sum::<f64>() / count as f64;
            let (v_r2, v_var, v_cev) = (avg(|s| s.v_r2), avg(|s| s.v_var), avg(|s| s.v_cev));
            Ok(SweepCell {
                graph_model: model,
                gamma,
                target: cfg.targets[ti],
                alpha,
                mean_edges: avg(|s| s.edges as f64),
                v_r2,
                v_var,
                v_cev,
                r2_over_var: v_r2 / v_var,
                r2_over_cev: v_r2 / v_cev,
                var_over_cev: v_var / v_cev,
                count,
                skipped,
            })
        })
        .collect()
}

/// One row per cell with the header listed in [`SweepCell`] field order.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], mut out: W) -> Result<()> {
    writeln!(
        out,
        "graph_model,gamma,target,alpha,mean_edges,v_r2,v_var,v_cev,r2_over_var,r2_over_cev,var_over_cev,count,skipped"
    )?;
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.graph_model.name(),
            c.gamma,
            c.target,
            c.alpha,
            c.mean_edges,
            c.v_r2,
            c.v_var,
            c.v_cev,
            c.r2_over_var,
            c.r2_over_cev,
            c.var_over_cev,
            c.count,
            c.skipped
        )?;
    }
    Ok(())
}
