use std::collections::BTreeSet;

use super::Dag;

/// Number of directed paths of a fixed length between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCount {
    Exact(u128),
    /// The count exceeded `u128`; the pair is still known to be connected.
    Saturated,
}

impl PathCount {
    fn add(self, other: PathCount) -> PathCount {
        match (self, other) {
            (PathCount::Exact(a), PathCount::Exact(b)) => {
                a.checked_add(b).map_or(PathCount::Saturated, PathCount::Exact)
            }
            _ => PathCount::Saturated,
        }
    }

    pub fn exact(self) -> Option<u128> {
        match self {
            PathCount::Exact(c) => Some(c),
            PathCount::Saturated => None,
        }
    }
}

/// Sparse view of the matrix powers `B^1, …, B^d` of a DAG adjacency.
///
/// `level(i)` lists every `(s, t, count)` with at least one path of length
/// `i`, where `count` is `(B^i)[s][t]`.
#[derive(Debug, Clone)]
pub struct PathLengthIndex {
    d: usize,
    levels: Vec<Vec<(usize, usize, PathCount)>>,
}

impl PathLengthIndex {
    pub fn new(g: &Dag) -> Self {
        let d = g.d();
        let zero = PathCount::Exact(0);
        let mut levels = Vec::new();
        // current[s * d + t] = paths of the current length from s to t
        let mut current = vec![zero; d * d];
        for (s, t) in g.edges() {
            current[s * d + t] = PathCount::Exact(1);
        }
        loop {
            let level: Vec<_> =
                current.iter().enumerate().filter(|(_, c)| **c != zero).map(|(k, &c)| (k / d, k % d, c)).collect();
            if level.is_empty() {
                break;
            }
            levels.push(level);
            let mut next = vec![zero; d * d];
            for s in 0..d {
                for t in 0..d {
                    let mut acc = zero;
                    for &k in g.parents(t) {
                        let c = current[s * d + k];
                        if c != zero {
                            acc = acc.add(c);
                        }
                    }
                    next[s * d + t] = acc;
                }
            }
            current = next;
        }
        PathLengthIndex { d, levels }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Length of the longest directed path (0 for an edgeless graph).
    pub fn max_length(&self) -> usize {
        self.levels.len()
    }

    /// Pairs connected by a path of exactly `length` edges; empty outside `1..=max_length`.
    pub fn level(&self, length: usize) -> &[(usize, usize, PathCount)] {
        if length == 0 || length > self.levels.len() {
            &[]
        } else {
            &self.levels[length - 1]
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &[(usize, usize, PathCount)])> {
        self.levels.iter().enumerate().map(|(i, l)| (i + 1, l.as_slice()))
    }

    pub fn count(&self, length: usize, s: usize, t: usize) -> PathCount {
        self.level(length).iter().find(|(a, b, _)| *a == s && *b == t).map_or(PathCount::Exact(0), |e| e.2)
    }

    /// Pairs joined by at least one directed path of any length.
    pub fn connected_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.levels.iter().flatten().map(|&(s, t, _)| (s, t)).collect()
    }

    pub fn has_saturated(&self) -> bool {
        self.levels.iter().flatten().any(|e| e.2 == PathCount::Saturated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_levels() {
        let idx = PathLengthIndex::new(&Dag::chain(3));
        let l1: Vec<_> = idx.level(1).iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(l1, vec![(0, 1), (1, 2)]);
        assert_eq!(idx.level(2), &[(0, 2, PathCount::Exact(1))]);
        assert!(idx.level(3).is_empty());
        assert_eq!(idx.max_length(), 2);
    }

    #[test]
    fn edgeless_has_no_levels() {
        let idx = PathLengthIndex::new(&Dag::empty(4));
        assert_eq!(idx.max_length(), 0);
        assert!(idx.connected_pairs().is_empty());
    }

    #[test]
    fn complete_four_node_dag() {
        // the dense 4-node example: 6 edges, 4 paths of length 2 over 3 pairs, 1 of length 3
        let edges = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];
        let idx = PathLengthIndex::new(&Dag::from_edges(4, &edges).unwrap());
        assert_eq!(idx.level(1).len(), 6);
        assert_eq!(idx.level(2).len(), 3);
        let total2: u128 = idx.level(2).iter().map(|e| e.2.exact().unwrap()).sum();
        assert_eq!(total2, 4);
        assert_eq!(idx.count(2, 0, 3), PathCount::Exact(2));
        assert_eq!(idx.level(3), &[(0, 3, PathCount::Exact(1))]);
    }

    #[test]
    fn saturation_is_sticky() {
        assert_eq!(PathCount::Exact(u128::MAX).add(PathCount::Exact(1)), PathCount::Saturated);
        assert_eq!(PathCount::Saturated.add(PathCount::Exact(0)), PathCount::Saturated);
    }
}
