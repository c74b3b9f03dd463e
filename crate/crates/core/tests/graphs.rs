mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use r2sort::graphs::{d_separated, positions, sample_er_dag, sample_sf_dag, GraphFile, PathCount};
use r2sort::seeding::rng_from_seed;
use r2sort::{Dag, PathLengthIndex};

fn dag_strategy(max_d: usize) -> impl Strategy<Value = Dag> {
    (2..=max_d, 0.0..0.8f64, any::<u64>()).prop_map(|(d, p, seed)| common::random_dag(d, p, &mut rng_from_seed(seed)))
}

fn index_as_map(idx: &PathLengthIndex) -> BTreeMap<(usize, usize), BTreeMap<usize, u128>> {
    let mut out: BTreeMap<(usize, usize), BTreeMap<usize, u128>> = BTreeMap::new();
    for (len, level) in idx.levels() {
        for &(s, t, c) in level {
            out.entry((s, t)).or_default().insert(len, c.exact().unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn path_index_matches_enumeration(g in dag_strategy(7)) {
        let idx = PathLengthIndex::new(&g);
        prop_assert_eq!(index_as_map(&idx), common::enumerate_paths(&g));
        prop_assert!(idx.max_length() < g.d());
    }

    #[test]
    fn topological_order_respects_edges(g in dag_strategy(9)) {
        let order = g.topological_order();
        let pos = positions(&order);
        for (s, t) in g.edges() {
            prop_assert!(pos[s] < pos[t]);
        }
    }

    #[test]
    fn descendants_and_ancestors_are_mirror_images(g in dag_strategy(8)) {
        for s in 0..g.d() {
            for t in g.descendants(s) {
                prop_assert!(g.ancestors(t).contains(&s));
            }
            let reach = common::descendants_incl(&g, s);
            let expected: Vec<usize> = (0..g.d()).filter(|&v| v != s && reach[v]).collect();
            prop_assert_eq!(g.descendants(s), expected);
        }
    }

    #[test]
    fn d_separation_matches_path_enumeration(g in dag_strategy(6), zmask in any::<u8>(), i in 0usize..6, j in 0usize..6) {
        let d = g.d();
        let (i, j) = (i % d, j % d);
        prop_assume!(i != j);
        let z: Vec<usize> = (0..d).filter(|&v| v != i && v != j && zmask >> v & 1 == 1).collect();
        prop_assert_eq!(d_separated(&g, i, j, &z).unwrap(), common::brute_d_separated(&g, i, j, &z));
    }

    #[test]
    fn er_has_exact_edge_count(d in 2usize..15, frac in 0.0..=1.0f64, seed in any::<u64>()) {
        let max = d * (d - 1) / 2;
        let m = (frac * max as f64).round() as usize;
        let g = sample_er_dag(d, m, &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(g.edge_count(), m);
    }

    #[test]
    fn sf_edge_count_and_attachment(d in 3usize..30, attach in 1usize..4, seed in any::<u64>()) {
        prop_assume!(attach < d);
        let g = sample_sf_dag(d, attach, &mut rng_from_seed(seed)).unwrap();
        let expected: usize = (0..d).map(|k| attach.min(k)).sum();
        prop_assert_eq!(g.edge_count(), expected);
    }

    #[test]
    fn graph_file_round_trip(g in dag_strategy(8)) {
        let file = GraphFile::from_dag(&g);
        let text = serde_json::to_string(&file).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_dag().unwrap(), g);
    }
}

#[test]
fn four_node_complete_dag_counts() {
    let g = Dag::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
    let idx = PathLengthIndex::new(&g);
    assert_eq!(idx.level(1).len(), 6);
    assert_eq!(idx.count(2, 0, 3), PathCount::Exact(2));
    assert_eq!(idx.count(3, 0, 3), PathCount::Exact(1));
    assert_eq!(idx.connected_pairs().len(), 6);
}

#[test]
fn all_four_node_dags_are_enumerated() {
    // number of labelled DAGs on 4 nodes
    assert_eq!(common::all_dags(4).len(), 543);
}

#[test]
fn er_single_edge_is_uniform_over_directed_pairs() {
    // 3 nodes, 1 edge: each of the 6 directed pairs has probability 1/6
    let trials = 6000;
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rng = rng_from_seed(17);
    for _ in 0..trials {
        let g = sample_er_dag(3, 1, &mut rng).unwrap();
        *counts.entry(g.edges()[0]).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let expected = trials as f64 / 6.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 0.999 quantile of chi-square with 5 degrees of freedom
    assert!(chi2 < 20.52, "chi2 = {chi2}");
}

#[test]
fn sf_hubs_collect_parents() {
    let mut rng = rng_from_seed(3);
    let mut max_in = 0;
    let mut max_out = 0;
    for _ in 0..50 {
        let g = sample_sf_dag(50, 2, &mut rng).unwrap();
        max_in = max_in.max(g.max_in_degree());
        max_out = max_out.max((0..50).map(|v| g.children(v).len()).max().unwrap());
    }
    assert!(max_out <= 2);
    assert!(max_in > 10, "max in-degree {max_in}");
}

#[test]
fn sampling_is_seed_deterministic() {
    let a = sample_er_dag(12, 20, &mut rng_from_seed(5)).unwrap();
    let b = sample_er_dag(12, 20, &mut rng_from_seed(5)).unwrap();
    assert_eq!(a, b);
    let c = sample_sf_dag(12, 2, &mut rng_from_seed(5)).unwrap();
    let e = sample_sf_dag(12, 2, &mut rng_from_seed(5)).unwrap();
    assert_eq!(c, e);
}
