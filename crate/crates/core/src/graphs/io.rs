use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Dag;
use crate::error::{Error, Result};

/// On-disk graph: `{"d": 3, "edges": [[0, 1]], "weights": [[0, 1, 0.7]]}`.
///
/// Node indices are 0-based. A missing `weights` key means the graph is unweighted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub d: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<(usize, usize, f64)>>,
}

impl GraphFile {
    pub fn from_dag(g: &Dag) -> Self {
        GraphFile { d: g.d(), edges: g.edges().into_iter().map(|(s, t)| [s, t]).collect(), weights: None }
    }

    /// Graph plus weights read off a row-major `d × d` matrix at the edge positions.
    pub fn weighted(g: &Dag, weight: impl Fn(usize, usize) -> f64) -> Self {
        let mut file = GraphFile::from_dag(g);
        file.weights = Some(g.edges().into_iter().map(|(s, t)| (s, t, weight(s, t))).collect());
        file
    }

    pub fn to_dag(&self) -> Result<Dag> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Dag::from_edges(self.d, &edges)?;
        if let Some(ws) = &self.weights {
            for &(s, t, w) in ws {
                if s >= self.d || t >= self.d || !g.has_edge(s, t) {
                    return Err(Error::invalid(format!("weight on ({s}, {t}) has no matching edge")));
                }
                if !w.is_finite() {
                    return Err(Error::invalid(format!("weight on ({s}, {t}) is not finite")));
                }
            }
        }
        Ok(g)
    }

    /// Dense row-major weight matrix; unweighted graphs get 1.0 on every edge.
    pub fn weight_matrix(&self) -> Vec<f64> {
        let d = self.d;
        let mut w = vec![0.0; d * d];
        match &self.weights {
            Some(ws) => {
                for &(s, t, v) in ws {
                    w[s * d + t] = v;
                }
            }
            None => {
                for e in &self.edges {
                    w[e[0] * d + e[1]] = 1.0;
                }
            }
        }
        w
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
