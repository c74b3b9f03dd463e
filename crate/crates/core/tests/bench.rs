use r2sort::bench::{
    audit_dataset, chain_experiment, mean, run_benchmark, simulate_replicate, spearman, sweep_heatmap, window_average,
    write_chain_csv, write_records_csv, Algorithm, AuditConfig, ChainConfig, ExperimentConfig, GraphModel, SweepConfig,
    WindowConfig,
};
use r2sort::sortability::{r2_criterion, sortability, var_criterion};
use r2sort::{WeightDist, Weighting};

fn small_config(seed: u64) -> ExperimentConfig {
    ExperimentConfig { d: 6, gamma: 1.0, n: 200, replicates: 8, seed, ..ExperimentConfig::default() }
}

fn csv_of(cfg: &ExperimentConfig) -> String {
    let out = run_benchmark(cfg).unwrap();
    let mut buf = Vec::new();
    write_records_csv(&out.records, &cfg.algorithms, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn benchmark_csv_is_byte_identical_across_runs() {
    let cfg = small_config(11);
    let a = csv_of(&cfg);
    assert_eq!(a, csv_of(&cfg));
    assert_eq!(a.lines().count(), cfg.replicates + 1);
    assert!(a.starts_with("replicate,seed,edges,v_var,v_r2,v_cev,sid_r2_sort_n_regress,shd_r2_sort_n_regress"));
    assert_ne!(a, csv_of(&small_config(12)));
}

#[test]
fn benchmark_does_not_depend_on_thread_count() {
    let cfg = small_config(5);
    let run =
        |threads: usize| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| csv_of(&cfg));
    assert_eq!(run(1), run(3));
}

#[test]
fn replicate_prefix_is_stable_when_adding_replicates() {
    let short = run_benchmark(&small_config(3)).unwrap();
    let long = run_benchmark(&ExperimentConfig { replicates: 12, ..small_config(3) }).unwrap();
    assert_eq!(short.records[..], long.records[..short.records.len()]);
}

#[test]
fn benchmark_records_are_in_range() {
    let cfg = small_config(21);
    let out = run_benchmark(&cfg).unwrap();
    assert!(out.skipped.is_empty());
    let d = cfg.d;
    for rec in &out.records {
        for v in [rec.v_var, rec.v_r2, rec.v_cev] {
            assert!((0.0..=1.0).contains(&v) || (v.is_nan() && rec.edges == 0));
        }
        for alg in Algorithm::ALL {
            let r = rec.result(alg).unwrap();
            assert!(r.sid <= d * (d - 1));
            assert!(r.shd <= d * (d - 1) / 2);
            assert_eq!(rec.field(&format!("sid_{}", alg.name())), Some(r.sid as f64));
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_benchmark(&ExperimentConfig { n: 6, ..small_config(0) }).is_err());
    assert!(run_benchmark(&ExperimentConfig { replicates: 0, ..small_config(0) }).is_err());
    assert!(run_benchmark(&ExperimentConfig { gamma: 10.0, ..small_config(0) }).is_err());
    let bad_window = WindowConfig { width: 0.0, ..WindowConfig::default() };
    assert!(run_benchmark(&ExperimentConfig { window: bad_window, ..small_config(0) }).is_err());
}

#[test]
fn config_json_rejects_unknown_fields() {
    let cfg: ExperimentConfig = serde_json::from_str(r#"{"d": 7, "graph_model": "sf"}"#).unwrap();
    assert_eq!(cfg.d, 7);
    assert_eq!(cfg.graph_model, GraphModel::Sf);
    assert_eq!(cfg.n, 1000);
    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"dd": 7}"#).is_err());
}

#[test]
fn window_average_examples() {
    let cfg = WindowConfig::default();
    assert_eq!(cfg.centers.len(), 19);
    let points = [(0.0, 1.0), (0.1, 3.0), (0.5, 7.0), (0.97, 2.0)];
    let curve = window_average(&points, &cfg);
    let at = |c: f64| curve.iter().find(|p| (p.center - c).abs() < 1e-9).copied();
    // 0.1 lies in the closed windows around 0.05, 0.10 and 0.15
    assert_eq!(at(0.05).unwrap().mean, 2.0);
    assert_eq!(at(0.05).unwrap().count, 2);
    assert_eq!(at(0.15).unwrap().mean, 3.0);
    let single = at(0.5).unwrap();
    assert_eq!((single.ci_low, single.ci_high, single.count), (7.0, 7.0, 1));
    assert!(at(0.3).is_none());
    assert_eq!(at(0.95).unwrap().mean, 2.0);
    assert!(window_average(&[], &cfg).is_empty());
}

#[test]
fn stats_helpers() {
    assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
    assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    assert!(spearman(&[1.0], &[1.0]).is_nan());
    assert!(spearman(&[1.0, 2.0], &[1.0]).is_nan());
}

#[test]
fn audit_matches_direct_computation() {
    let cfg = small_config(4);
    let sim = simulate_replicate(cfg.graph_model, cfg.d, cfg.gamma, &cfg.weights, &cfg.noise, cfg.n, 4, 0).unwrap();
    let data = sim.raw.standardize().unwrap();
    let g = sim.instance.dag();
    let audit = AuditConfig { bootstrap: 0, ..AuditConfig::default() };
    let report = audit_dataset(&data, Some(g), &audit).unwrap();
    let r2 = r2_criterion(&data).unwrap();
    assert_eq!(report.full.r2, r2);
    assert_eq!(report.full.v_r2, Some(sortability(&r2, g, Weighting::UniqueLength).unwrap().value));
    assert!(report.bootstrap.is_none());
    let json = serde_json::to_value(&report).unwrap();
    assert!(json.get("bootstrap").is_none());

    let boot = audit_dataset(&data, Some(g), &AuditConfig { bootstrap: 5, ..audit }).unwrap();
    let b = boot.bootstrap.unwrap();
    assert_eq!(b.resamples + b.skipped, 5);
    assert_eq!(b.r2.len(), cfg.d);
    for s in &b.r2 {
        assert!(s.min <= s.mean && s.mean <= s.max);
    }

    let without = audit_dataset(&data, None, &audit).unwrap();
    assert_eq!(without.full.variance, var_criterion(&data));
    assert!(without.full.v_r2.is_none());
    assert!(audit_dataset(&data, Some(&r2sort::Dag::empty(cfg.d + 1)), &audit).is_err());
}

#[test]
fn sweep_single_cell() {
    let cfg = SweepConfig {
        graph_models: vec![GraphModel::Er],
        d: 8,
        gammas: vec![1.0],
        targets: vec![0.5],
        n: 200,
        replicates: 4,
        seed: 9,
        ..SweepConfig::default()
    };
    let cells = sweep_heatmap(&cfg).unwrap();
    assert_eq!(cells.len(), 1);
    let c = &cells[0];
    assert_eq!(c.count + c.skipped, 4);
    let achieved = r2sort::anm::expected_log_abs_weight(&WeightDist::new(cfg.inner_bound, c.alpha).unwrap());
    assert!((achieved - 0.5).abs() < 1e-8);
    assert!((c.r2_over_var - c.v_r2 / c.v_var).abs() < 1e-15);
    assert_eq!(cells, sweep_heatmap(&cfg).unwrap());
    assert!(sweep_heatmap(&SweepConfig { n: 8, ..cfg }).is_err());
}

#[test]
fn chain_records_follow_the_bound() {
    let cfg = ChainConfig { p_max: 5, replicates: 3, n: 400, seed: 2, ..ChainConfig::default() };
    let recs = chain_experiment(&cfg).unwrap();
    assert_eq!(recs.len(), 3 * 6);
    for r in &recs {
        if r.position == 0 {
            assert!(r.weight_in.is_none() && r.lower_bound.is_none());
            assert_eq!(r.variance, r.sigma * r.sigma);
        } else {
            assert!(r.variance >= r.lower_bound.unwrap() - 1e-12);
            assert!((0.0..=1.0).contains(&r.cev));
        }
    }
    let mut buf = Vec::new();
    write_chain_csv(&recs, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("replicate,position,weight_in,sigma,variance,cev,r2,lower_bound\n"));
    assert_eq!(text.lines().count(), recs.len() + 1);
    assert!(chain_experiment(&ChainConfig { n: 5, ..cfg }).is_err());
}
