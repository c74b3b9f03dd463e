//! Experiment drivers.
//!
//! Every driver is a pure function of its config: replicate `r` draws from
//! its own seeded streams (see [`crate::seeding`]) and results are gathered
//! by replicate index, so output does not depend on the number of threads.

mod audit;
mod chain;
mod counterexample;
mod stats;
pub mod svg;
mod sweep;
mod window;

pub use audit::{audit_dataset, AuditConfig, AuditReport, AuditSnapshot, BootstrapSummary, Summary};
pub use chain::{chain_experiment, write_chain_csv, ChainConfig, ChainRecord};
pub use counterexample::{
    counterexample_instance, counterexample_report, CounterexampleConstants, CounterexampleReport,
};
pub use stats::{mean, spearman};
pub use sweep::{sweep_heatmap, write_sweep_csv, SweepCell, SweepConfig};
pub use window::{window_average, CurvePoint, WindowConfig};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anm::{sample_data, sample_instance, Dataset, NoiseSpec, WeightDist};
use crate::discovery::{random_regress, sort_n_regress, threshold_to_dag, Penalty};
use crate::error::{Error, Result};
use crate::evaluation::{shd, sid};
use crate::graphs::{sample_er_dag, sample_sf_dag, Dag, PathLengthIndex};
use crate::regression::LassoOptions;
use crate::seeding::{stream, Purpose};
use crate::sortability::{cev_criterion, r2_criterion, sortability_with_index, var_criterion, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphModel {
    Er,
    Sf,
}

impl GraphModel {
    pub fn name(self) -> &'static str {
        match self {
            GraphModel::Er => "er",
            GraphModel::Sf => "sf",
        }
    }

    /// Checks that `(d, gamma)` describes a valid graph for this model.
    pub fn validate(self, d: usize, gamma: f64) -> Result<()> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("average in-degree must be nonnegative, got {gamma}")));
        }
        match self {
            GraphModel::Er => {
                let m = (gamma * d as f64).round() as usize;
                let max = d * d.saturating_sub(1) / 2;
                if m > max {
                    return Err(Error::invalid(format!("gamma·d = {m} edges exceeds the {max} possible on {d} nodes")));
                }
            }
            GraphModel::Sf => {
                if gamma.fract() != 0.0 || gamma < 1.0 {
                    return Err(Error::invalid(format!(
                        "scale-free graphs need a positive integer gamma, got {gamma}"
                    )));
                }
                if gamma as usize >= d {
                    return Err(Error::invalid(format!("scale-free gamma {gamma} must be below d = {d}")));
                }
            }
        }
        Ok(())
    }

    /// `G(d, γd)`: exactly `round(γd)` edges for ER, `γ` attachments per node for SF.
    pub fn sample<R: rand::Rng + ?Sized>(self, d: usize, gamma: f64, rng: &mut R) -> Result<Dag> {
        self.validate(d, gamma)?;
        match self {
            GraphModel::Er => sample_er_dag(d, (gamma * d as f64).round() as usize, rng),
            GraphModel::Sf => sample_sf_dag(d, gamma as usize, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    R2SortNRegress,
    VarSortNRegress,
    RandomRegress,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::R2SortNRegress, Algorithm::VarSortNRegress, Algorithm::RandomRegress];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::R2SortNRegress => "r2_sort_n_regress",
            Algorithm::VarSortNRegress => "var_sort_n_regress",
            Algorithm::RandomRegress => "random_regress",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm {s:?}")))
    }
}

/// Benchmark settings. Defaults follow the standardized ER(20, 40) setup
/// with Gaussian noise, `σ ~ Unif(0.5, 2)` and `W ~ Unif(±(0.5, 2))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph_model: GraphModel,
    pub d: usize,
    /// Average in-degree γ.
    pub gamma: f64,
    pub noise: NoiseSpec,
    pub weights: WeightDist,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Standardize each column before sortability and discovery.
    pub standardize: bool,
    pub algorithms: Vec<Algorithm>,
    pub weighting: Weighting,
    pub tie_tolerance: f64,
    /// Edges with `|ŵ| ≤ threshold` are dropped before evaluation.
    pub threshold: f64,
    pub lasso: LassoOptions,
    pub window: WindowConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph_model: GraphModel::Er,
            d: 20,
            gamma: 2.0,
            noise: NoiseSpec::default(),
            weights: WeightDist::new(0.5, 2.0).expect("valid bounds"),
            n: 1000,
            replicates: 500,
            seed: 0,
            standardize: true,
            algorithms: Algorithm::ALL.to_vec(),
            weighting: Weighting::UniqueLength,
            tie_tolerance: 0.0,
            threshold: 0.0,
            lasso: LassoOptions::default(),
            window: WindowConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::invalid("d must be positive"));
        }
        self.graph_model.validate(self.d, self.gamma)?;
        self.noise.sigma.validate()?;
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if self.n <= self.d || self.n < 3 {
            return Err(Error::invalid(format!("n = {} must exceed both d = {} and 2", self.n, self.d)));
        }
        self.window.validate()?;
        if !(self.tie_tolerance >= 0.0) || !(self.threshold >= 0.0) {
            return Err(Error::invalid("tie_tolerance and threshold must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub algorithm: Algorithm,
    pub sid: usize,
    pub shd: usize,
}

/// One simulated ANM: its sortabilities and how each algorithm fared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub replicate: u64,
    pub seed: u64,
    pub edges: usize,
    /// Var-sortability of the raw, unstandardized data.
    pub v_var: f64,
    pub v_r2: f64,
    pub v_cev: f64,
    pub results: Vec<AlgorithmResult>,
}

impl BenchRecord {
    /// Numeric column by CSV name (`v_r2`, `sid_r2_sort_n_regress`, …).
    pub fn field(&self, name: &str) -> Option<f64> {
        match name {
            "v_var" => Some(self.v_var),
            "v_r2" => Some(self.v_r2),
            "v_cev" => Some(self.v_cev),
            "edges" => Some(self.edges as f64),
            "replicate" => Some(self.replicate as f64),
            _ => {
                let (metric, alg) = name.split_once('_')?;
                let r = self.results.iter().find(|r| r.algorithm.name() == alg)?;
                match metric {
                    "sid" => Some(r.sid as f64),
                    "shd" => Some(r.shd as f64),
                    _ => None,
                }
            }
        }
    }

    pub fn result(&self, algorithm: Algorithm) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == algorithm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedReplicate {
    pub replicate: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<SkippedReplicate>,
}

/// One replicate's simulated model and data.
pub struct Simulated {
    pub instance: crate::anm::AnmInstance,
    pub raw: Dataset,
}

/// Graph, parameters and data of replicate `replicate`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_replicate(
    graph_model: GraphModel,
    d: usize,
    gamma: f64,
    weights: &WeightDist,
    noise: &NoiseSpec,
    n: usize,
    seed: u64,
    replicate: u64,
) -> Result<Simulated> {
    let g = graph_model.sample(d, gamma, &mut stream(seed, replicate, Purpose::Graph))?;
    let instance = sample_instance(&g, weights, noise, &mut stream(seed, replicate, Purpose::Weights))?;
    let raw = sample_data(&instance, n, &mut stream(seed, replicate, Purpose::Data))?;
    Ok(Simulated { instance, raw })
}

fn run_replicate(cfg: &ExperimentConfig, replicate: u64) -> Result<BenchRecord> {
    let sim =
        simulate_replicate(cfg.graph_model, cfg.d, cfg.gamma, &cfg.weights, &cfg.noise, cfg.n, cfg.seed, replicate)?;
    let g = sim.instance.dag();
    let index = PathLengthIndex::new(g);
    let sortable = |tau: &[f64]| -> Result<f64> {
        Ok(sortability_with_index(tau, &index, cfg.weighting, cfg.tie_tolerance)?.value)
    };
    let v_var = sortable(&var_criterion(&sim.raw))?;
    let data = if cfg.standardize { sim.raw.standardize()? } else { sim.raw.clone() };
    let r2 = r2_criterion(&data)?;
    let v_r2 = sortable(&r2)?;
    let v_cev = sortable(&cev_criterion(&data, g)?)?;

    let penalty = Penalty::LassoBic(cfg.lasso);
    let mut results = Vec::with_capacity(cfg.algorithms.len());
    for &algorithm in &cfg.algorithms {
        let est = match algorithm {
            Algorithm::R2SortNRegress => sort_n_regress(&data, r2.clone(), penalty)?,
            Algorithm::VarSortNRegress => sort_n_regress(&data, var_criterion(&data), penalty)?,
            Algorithm::RandomRegress => random_regress(&data, &mut stream(cfg.seed, replicate, Purpose::Algorithm))?,
        };
        let g_est = threshold_to_dag(&est, cfg.threshold);
        results.push(AlgorithmResult { algorithm, sid: sid(g, &g_est)?, shd: shd(g, &g_est)? });
    }
    Ok(BenchRecord { replicate, seed: cfg.seed, edges: g.edge_count(), v_var, v_r2, v_cev, results })
}

/// Simulate, standardize, score and evaluate every replicate.
///
/// Replicates whose data turn out degenerate (or otherwise fail) are
/// reported in `skipped` instead of aborting the run.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<BenchOutput> {
    cfg.validate()?;
    let outcomes: Vec<(u64, Result<BenchRecord>)> =
        (0..cfg.replicates as u64).into_par_iter().map(|r| (r, run_replicate(cfg, r))).collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (replicate, outcome) in outcomes {
        match outcome {
            Ok(rec) => records.push(rec),
            Err(e) => {
                log::warn!("skipping replicate {replicate}: {e}");
                skipped.push(SkippedReplicate { replicate, reason: e.to_string() });
            }
        }
    }
    Ok(BenchOutput { records, skipped })
}

/// Header: `replicate,seed,edges,v_var,v_r2,v_cev` then `sid_<alg>,shd_<alg>` per algorithm.
pub fn write_records_csv<W: Write>(records: &[BenchRecord], algorithms: &[Algorithm], mut out: W) -> Result<()> {
    let mut header =
        vec!["replicate".to_string(), "seed".into(), "edges".into(), "v_var".into(), "v_r2".into(), "v_cev".into()];
    for a in algorithms {
        header.push(format!("sid_{}", a.name()));
        header.push(format!("shd_{}", a.name()));
    }
    writeln!(out, "{}", header.join(","))?;
    for r in records {
        let mut row = vec![
            r.replicate.to_string(),
            r.seed.to_string(),
            r.edges.to_string(),
            r.v_var.to_string(),
            r.v_r2.to_string(),
            r.v_cev.to_string(),
        ];
        for a in algorithms {
            match r.result(*a) {
                Some(res) => {
                    row.push(res.sid.to_string());
                    row.push(res.shd.to_string());
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
