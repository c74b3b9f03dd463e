use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::anm::Dataset;
use crate::error::{Error, Result};
use crate::graphs::{Dag, PathLengthIndex};
use crate::seeding::{stream, Purpose};
use crate::sortability::{cev_criterion, r2_criterion, sortability_with_index, var_criterion, Weighting};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    /// Number of bootstrap resamples; 0 disables the bootstrap block.
    pub bootstrap: usize,
    pub seed: u64,
    pub weighting: Weighting,
    pub tie_tolerance: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { bootstrap: 30, seed: 0, weighting: Weighting::UniqueLength, tie_tolerance: 0.0 }
    }
}

/// Criteria of one dataset; sortabilities need a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSnapshot {
    pub r2: Vec<f64>,
    pub variance: Vec<f64>,
    pub v_r2: Option<f64>,
    pub v_var: Option<f64>,
    pub v_cev: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    fn of(xs: impl IntoIterator<Item = f64>) -> Option<Summary> {
        let xs: Vec<f64> = xs.into_iter().collect();
        if xs.is_empty() {
            return None;
        }
        Some(Summary {
            mean: xs.iter().sum::<f64>() / xs.len() as f64,
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub resamples: usize,
    /// Resamples dropped because a column became constant.
    pub skipped: usize,
    pub v_r2: Option<Summary>,
    pub v_var: Option<Summary>,
    pub v_cev: Option<Summary>,
    /// Per-variable summary of R² given all others.
    pub r2: Vec<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub d: usize,
    pub names: Vec<String>,
    pub weighting: Weighting,
    pub full: AuditSnapshot,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<BootstrapSummary>,
}

fn snapshot(data: &Dataset, graph: Option<(&Dag, &PathLengthIndex)>, cfg: &AuditConfig) -> Result<AuditSnapshot> {
    let r2 = r2_criterion(data)?;
    let variance = var_criterion(data);
    let (v_r2, v_var, v_cev) = match graph {
        None => (None, None, None),
        Some((g, index)) => {
            let v = |tau: &[f64]| -> Result<f64> {
                Ok(sortability_with_index(tau, index, cfg.weighting, cfg.tie_tolerance)?.value)
            };
            (Some(v(&r2)?), Some(v(&variance)?), Some(v(&cev_criterion(data, g)?)?))
        }
    };
    Ok(AuditSnapshot { r2, variance, v_r2, v_var, v_cev })
}

/// Criteria and sortabilities of `data` and of `cfg.bootstrap` resamples
/// drawn with replacement.
///
/// Sortabilities need `graph`; without it only the per-variable R² and
/// variances are reported.
pub fn audit_dataset(data: &Dataset, graph: Option<&Dag>, cfg: &AuditConfig) -> Result<AuditReport> {
    if let Some(g) = graph {
        if g.d() != data.d() {
            return Err(Error::DimensionMismatch { expected: data.d(), found: g.d() });
        }
    }
    let index = graph.map(PathLengthIndex::new);
    let with_graph = graph.zip(index.as_ref());
    let full = snapshot(data, with_graph, cfg)?;

    let bootstrap = if cfg.bootstrap == 0 {
        None
    } else {
        let n = data.n();
        let mut snaps = Vec::with_capacity(cfg.bootstrap);
        let mut skipped = 0;
        for b in 0..cfg.bootstrap as u64 {
            let mut rng = stream(cfg.seed, b, Purpose::Bootstrap);
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            match data.resample(&rows).and_then(|ds| snapshot(&ds, with_graph, cfg)) {
                Ok(s) => snaps.push(s),
                Err(e @ Error::DegenerateColumn { .. }) => {
                    log::warn!("skipping bootstrap resample {b}: {e}");
                    skipped += 1;
                }
                Err(e) => return Err(e),
            }
        }
        Some(BootstrapSummary {
            resamples: snaps.len(),
            skipped,
            v_r2: Summary::of(snaps.iter().filter_map(|s| s.v_r2)),
            v_var: Summary::of(snaps.iter().filter_map(|s| s.v_var)),
            v_cev: Summary::of(snaps.iter().filter_map(|s| s.v_cev)),
            r2: (0..data.d()).filter_map(|t| Summary::of(snaps.iter().map(|s| s.r2[t]))).collect(),
        })
    };
    Ok(AuditReport {
        n: data.n(),
        d: data.d(),
        names: (0..data.d()).map(|t| data.column_name(t)).collect(),
        weighting: cfg.weighting,
        full,
        bootstrap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Dataset {
        Dataset::from_rows(5, 2, &[1.0, 2.0, 2.0, 3.9, 3.0, 6.2, 4.0, 8.1, 5.0, 9.7]).unwrap()
    }

    #[test]
    fn zero_bootstrap_has_no_block() {
        let rep =
            audit_dataset(&small(), Some(&Dag::chain(2)), &AuditConfig { bootstrap: 0, ..Default::default() }).unwrap();
        assert!(rep.bootstrap.is_none());
        assert!(rep.full.v_r2.is_some());
        assert!(!serde_json::to_string(&rep).unwrap().contains("bootstrap"));
    }

    #[test]
    fn graph_must_match() {
        assert!(audit_dataset(&small(), Some(&Dag::chain(3)), &AuditConfig::default()).is_err());
    }

    #[test]
    fn bootstrap_summary_brackets_mean() {
        let rep =
            audit_dataset(&small(), Some(&Dag::chain(2)), &AuditConfig { bootstrap: 5, ..Default::default() }).unwrap();
        let b = rep.bootstrap.unwrap();
        assert_eq!(b.resamples + b.skipped, 5);
        if let Some(s) = b.v_var {
            assert!(s.min <= s.mean && s.mean <= s.max);
        }
    }
}
