//! Directed acyclic graphs and the graph queries used throughout the crate.

mod dsep;
mod io;
mod paths;
mod sample;

pub use dsep::d_separated;
pub use io::GraphFile;
pub use paths::{PathCount, PathLengthIndex};
pub use sample::{sample_er_dag, sample_sf_dag};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};

/// Binary adjacency over `d` nodes; `(s, t)` present iff `s → t`.
///
/// Acyclicity is checked on construction and holds for every value of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    d: usize,
    adj: Vec<bool>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    pub fn empty(d: usize) -> Self {
        Dag { d, adj: vec![false; d * d], parents: vec![Vec::new(); d], children: vec![Vec::new(); d] }
    }

    /// Builds a DAG from an edge list. Duplicate edges collapse; self loops,
    /// out-of-range nodes and cycles are rejected.
    pub fn from_edges(d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Dag::empty(d);
        for &(s, t) in edges {
            if s >= d || t >= d {
                return Err(Error::invalid(format!("edge ({s}, {t}) out of range for d = {d}")));
            }
            if s == t {
                return Err(Error::invalid(format!("self loop on node {s}")));
            }
            if !g.adj[s * d + t] {
                g.adj[s * d + t] = true;
                g.children[s].push(t);
                g.parents[t].push(s);
            }
        }
        for list in g.parents.iter_mut().chain(g.children.iter_mut()) {
            list.sort_unstable();
        }
        if let Some(node) = g.find_cycle_node() {
            return Err(Error::invalid(format!("graph has a directed cycle through node {node}")));
        }
        Ok(g)
    }

    /// Row-major `d × d` 0/1 matrix.
    pub fn from_adjacency(d: usize, adjacency: &[u8]) -> Result<Self> {
        if adjacency.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: adjacency.len() });
        }
        let mut edges = Vec::new();
        for (k, &v) in adjacency.iter().enumerate() {
            match v {
                0 => {}
                1 => edges.push((k / d, k % d)),
                other => return Err(Error::invalid(format!("adjacency entry {other} is not 0/1"))),
            }
        }
        Dag::from_edges(d, &edges)
    }

    /// Edge list of a chain `0 → 1 → … → d-1`.
    pub fn chain(d: usize) -> Self {
        let edges: Vec<_> = (1..d).map(|t| (t - 1, t)).collect();
        Dag::from_edges(d, &edges).expect("chains are acyclic")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.adj[s * self.d + t]
    }

    pub fn parents(&self, t: usize) -> &[usize] {
        &self.parents[t]
    }

    pub fn children(&self, s: usize) -> &[usize] {
        &self.children[s]
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Edges in lexicographic `(s, t)` order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.children.iter().enumerate().flat_map(|(s, ch)| ch.iter().map(move |&t| (s, t))).collect()
    }

    pub fn adjacency(&self) -> Vec<u8> {
        self.adj.iter().map(|&b| b as u8).collect()
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Kahn's algorithm, always releasing the smallest ready index first, so
    /// the result is deterministic.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.d).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.d);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        debug_assert_eq!(order.len(), self.d);
        order
    }

    /// All `t ≠ s` reachable from `s`, ascending.
    pub fn descendants(&self, s: usize) -> Vec<usize> {
        let mask = self.reach_mask(s, |v| &self.children[v]);
        (0..self.d).filter(|&v| v != s && mask[v]).collect()
    }

    /// All `s ≠ t` with a directed path to `t`, ascending.
    pub fn ancestors(&self, t: usize) -> Vec<usize> {
        let mask = self.reach_mask(t, |v| &self.parents[v]);
        (0..self.d).filter(|&v| v != t && mask[v]).collect()
    }

    /// Reachability mask from `start`, including `start` itself.
    pub(crate) fn reach_mask<'a, F>(&'a self, start: usize, next: F) -> Vec<bool>
    where
        F: Fn(usize) -> &'a [usize],
    {
        let mut seen = vec![false; self.d];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &w in next(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Copy of the graph keeping only edges for which `keep(s, t)` holds.
    pub fn filter_edges<F: Fn(usize, usize) -> bool>(&self, keep: F) -> Dag {
        let edges: Vec<_> = self.edges().into_iter().filter(|&(s, t)| keep(s, t)).collect();
        Dag::from_edges(self.d, &edges).expect("edge subsets of a DAG are acyclic")
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Dag> {
        if perm.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: perm.len() });
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(s, t)| (perm[s], perm[t])).collect();
        Dag::from_edges(self.d, &edges)
    }

    fn find_cycle_node(&self) -> Option<usize> {
        // iterative three-colour DFS
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut colour = vec![WHITE; self.d];
        for root in 0..self.d {
            if colour[root] != WHITE {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            colour[root] = GREY;
            while let Some(top) = stack.last_mut() {
                let v = top.0;
                if let Some(&c) = self.children[v].get(top.1) {
                    top.1 += 1;
                    match colour[c] {
                        WHITE => {
                            colour[c] = GREY;
                            stack.push((c, 0));
                        }
                        GREY => return Some(c),
                        _ => {}
                    }
                } else {
                    colour[v] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Position of each node in `order`.
pub fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_self_loops() {
        assert!(Dag::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Dag::from_edges(2, &[(1, 1)]).is_err());
        assert!(Dag::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn chain_order_is_unique() {
        assert_eq!(Dag::chain(3).topological_order(), vec![0, 1, 2]);
        let g = Dag::from_edges(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.topological_order(), vec![2, 1, 0]);
    }

    #[test]
    fn edgeless_order_is_a_permutation() {
        let mut order = Dag::empty(3).topological_order();
        order.sort_unstable();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn descendants_and_ancestors() {
        let g = Dag::chain(3);
        assert_eq!(g.descendants(0), vec![1, 2]);
        assert_eq!(g.ancestors(2), vec![0, 1]);
        assert!(Dag::empty(4).descendants(2).is_empty());
    }

    #[test]
    fn adjacency_round_trip() {
        let g = Dag::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let back = Dag::from_adjacency(3, &g.adjacency()).unwrap();
        assert_eq!(g, back);
        assert!(Dag::from_adjacency(2, &[0, 2, 0, 0]).is_err());
    }
}
