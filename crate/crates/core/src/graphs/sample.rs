use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::Dag;
use crate::error::{Error, Result};

/// Erdős–Rényi DAG with exactly `m` edges.
///
/// The `m` edges are drawn without replacement from the strictly upper
/// triangle, then node labels are shuffled.
pub fn sample_er_dag<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Dag> {
    let slots = d * d.saturating_sub(1) / 2;
    if m > slots {
        return Err(Error::invalid(format!("{m} edges requested but a DAG on {d} nodes has at most {slots}")));
    }
    let chosen = index::sample(rng, slots, m);
    let mut edges: Vec<(usize, usize)> = chosen.iter().map(|k| upper_slot(d, k)).collect();
    edges.sort_unstable();
    shuffled(d, &edges, rng)
}

/// Scale-free DAG from Barabási–Albert preferential attachment.
///
/// Nodes arrive one by one; node `k` links to `min(attach, k)` distinct
/// earlier nodes picked with probability proportional to degree + 1. Every
/// edge is directed from the newer node to the older one, so hubs collect
/// many parents, and node labels are then shuffled. The graph has
/// `Σ_k min(attach, k)` edges.
pub fn sample_sf_dag<R: Rng + ?Sized>(d: usize, attach: usize, rng: &mut R) -> Result<Dag> {
    if attach == 0 {
        return Err(Error::invalid("scale-free attachment must be at least 1"));
    }
    if attach >= d {
        return Err(Error::invalid(format!("scale-free attachment {attach} must be smaller than the node count {d}")));
    }
    let mut degree = vec![0usize; d];
    let mut edges = Vec::new();
    for new in 1..d {
        let k = attach.min(new);
        let mut targets: Vec<usize> = Vec::with_capacity(k);
        while targets.len() < k {
            let total: usize = (0..new).filter(|v| !targets.contains(v)).map(|v| degree[v] + 1).sum();
            let mut pick = rng.random_range(0..total);
            let mut chosen = None;
            for v in (0..new).filter(|v| !targets.contains(v)) {
                let w = degree[v] + 1;
                if pick < w {
                    chosen = Some(v);
                    break;
                }
                pick -= w;
            }
            targets.push(chosen.expect("weights cover the draw"));
        }
        for &old in &targets {
            degree[old] += 1;
            degree[new] += 1;
            edges.push((new, old));
        }
    }
    shuffled(d, &edges, rng)
}

fn shuffled<R: Rng + ?Sized>(d: usize, edges: &[(usize, usize)], rng: &mut R) -> Result<Dag> {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    Dag::from_edges(d, edges)?.relabel(&perm)
}

/// Maps a linear index over the strictly upper triangle (row-major) to `(row, col)`.
fn upper_slot(d: usize, mut k: usize) -> (usize, usize) {
    for row in 0..d {
        let width = d - row - 1;
        if k < width {
            return (row, row + 1 + k);
        }
        k -= width;
    }
    unreachable!("slot index beyond the upper triangle")
}
