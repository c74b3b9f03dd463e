//! Command-line front end for simulation, scoring, discovery and experiments.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use r2sort::anm::{sample_data, sample_instance, AnmInstance};
use r2sort::bench::{
    self, audit_dataset, chain_experiment, counterexample_report, run_benchmark, spearman, sweep_heatmap,
    window_average, write_chain_csv, write_records_csv, write_sweep_csv, AuditConfig, ChainConfig, ExperimentConfig,
    SweepConfig,
};
use r2sort::discovery::{r2_sort_n_regress, random_regress, var_sort_n_regress};
use r2sort::evaluation::distances;
use r2sort::graphs::GraphFile;
use r2sort::seeding::{rng_from_seed, stream, Purpose};
use r2sort::sortability::{cev_criterion, r2_criterion, sortability, var_criterion};
use r2sort::{Criterion, Dataset, Error, Result, Weighting};

#[derive(Parser)]
#[command(name = "r2sort", version, about = "R²-sortability of linear additive noise models")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config file for the chosen subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path; stdout if omitted. Some subcommands treat it as a directory or prefix.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a DAG, an ANM on it, and data; writes `<out>.csv` and `<out>.graph.json`.
    Simulate(SimulateArgs),
    /// Sortability of a criterion on a dataset with respect to a graph.
    Sortability(SortabilityArgs),
    /// Estimate a weighted DAG from data.
    Discover(DiscoverArgs),
    /// SID and SHD between a true and an estimated graph.
    Evaluate(EvaluateArgs),
    /// Benchmark sort-and-regress methods on simulated ANMs.
    Bench(BenchArgs),
    /// Variance, CEV and R² along simulated causal chains.
    Chain(ChainArgs),
    /// Mean sortabilities over in-degree and weight-distribution grids.
    Sweep(SweepArgs),
    /// Analytic report for the unit-variance, half-CEV four-node model.
    Counterexample,
    /// Sortability audit of an external dataset with bootstrap resampling.
    Audit(AuditArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of observations (overrides config `n`).
    #[arg(long)]
    n: Option<usize>,
    /// Number of variables (overrides config `d`).
    #[arg(long)]
    d: Option<usize>,
    /// Replicate index within the seed's streams.
    #[arg(long, default_value_t = 0)]
    replicate: u64,
}

#[derive(Args)]
struct SortabilityArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "r2")]
    criterion: CriterionArg,
    #[arg(long, default_value = "unique_length")]
    weighting: WeightingArg,
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "r2_sort_n_regress")]
    method: MethodArg,
    /// Standardize columns before discovery.
    #[arg(long)]
    standardize: bool,
    /// Drop estimated edges with |w| at or below this value.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long = "true")]
    truth: PathBuf,
    #[arg(long)]
    estimate: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Overrides the config replicate count.
    #[arg(long)]
    replicates: Option<usize>,
    /// Also write windowed curves and SVG plots next to the CSV.
    #[arg(long)]
    plots: bool,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    replicates: Option<usize>,
    /// Also write one SVG heatmap of mean v_r2 per graph model.
    #[arg(long)]
    plots: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    bootstrap: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum CriterionArg {
    Var,
    R2,
    Cev,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum WeightingArg {
    UniqueLength,
    PathExistence,
    PathCount,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::UniqueLength => Weighting::UniqueLength,
            WeightingArg::PathExistence => Weighting::PathExistence,
            WeightingArg::PathCount => Weighting::PathCount,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
#[allow(clippy::enum_variant_names)]
enum MethodArg {
    R2SortNRegress,
    VarSortNRegress,
    RandomRegress,
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
    }
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `base` with `suffix` appended to its file name.
fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn simulate(common: &Common, args: &SimulateArgs) -> Result<()> {
    let mut cfg: ExperimentConfig = load_config(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(d) = args.d {
        cfg.d = d;
    }
    let g = cfg.graph_model.sample(cfg.d, cfg.gamma, &mut stream(cfg.seed, args.replicate, Purpose::Graph))?;
    let inst: AnmInstance =
        sample_instance(&g, &cfg.weights, &cfg.noise, &mut stream(cfg.seed, args.replicate, Purpose::Weights))?;
    let data = sample_data(&inst, cfg.n, &mut stream(cfg.seed, args.replicate, Purpose::Data))?;
    let graph = GraphFile::weighted(&g, |s, t| inst.weights()[(s, t)]);
    match &common.out {
        Some(base) => {
            data.write_csv_path(&sibling(base, ".csv"))?;
            graph.write(&sibling(base, ".graph.json"))?;
        }
        None => data.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn sortability_cmd(common: &Common, args: &SortabilityArgs) -> Result<()> {
    let data = Dataset::read_csv_path(&args.data)?;
    let g = GraphFile::read(&args.graph)?.to_dag()?;
    if g.d() != data.d() {
        return Err(Error::DimensionMismatch { expected: data.d(), found: g.d() });
    }
    let (criterion, tau) = match args.criterion {
        CriterionArg::Var => (Criterion::Var, var_criterion(&data)),
        CriterionArg::R2 => (Criterion::R2, r2_criterion(&data)?),
        CriterionArg::Cev => (Criterion::Cev, cev_criterion(&data, &g)?),
    };
    let report = sortability(&tau, &g, args.weighting.into())?.with_criterion(criterion);
    write_json(&report, common.out.as_deref())
}

fn discover(common: &Common, args: &DiscoverArgs) -> Result<()> {
    let mut data = Dataset::read_csv_path(&args.data)?;
    if args.standardize {
        data = data.standardize()?;
    }
    let est = match args.method {
        MethodArg::R2SortNRegress => r2_sort_n_regress(&data)?,
        MethodArg::VarSortNRegress => var_sort_n_regress(&data)?,
        MethodArg::RandomRegress => random_regress(&data, &mut rng_from_seed(common.seed.unwrap_or(0)))?,
    };
    write_json(&est.to_graph_file(args.threshold), common.out.as_deref())
}

fn evaluate(common: &Common, args: &EvaluateArgs) -> Result<()> {
    let truth = GraphFile::read(&args.truth)?.to_dag()?;
    let est = GraphFile::read(&args.estimate)?.to_dag()?;
    write_json(&distances(&truth, &est)?, common.out.as_deref())
}

fn bench_cmd(common: &Common, args: &BenchArgs) -> Result<()> {
    let mut cfg: ExperimentConfig = load_config(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    let result = run_benchmark(&cfg)?;
    write_records_csv(&result.records, &cfg.algorithms, output(common.out.as_deref())?)?;
    if let Some(base) = &common.out {
        let meta = serde_json::json!({
            "config": cfg,
            "records": result.records.len(),
            "skipped": result.skipped,
            "spearman_v_r2_sid": cfg.algorithms.iter().map(|a| {
                let name = format!("sid_{}", a.name());
                let xs: Vec<f64> = result.records.iter().map(|r| r.v_r2).collect();
                let ys: Vec<f64> = result.records.iter().filter_map(|r| r.field(&name)).collect();
                (a.name(), spearman(&xs, &ys))
            }).collect::<std::collections::BTreeMap<_, _>>(),
        });
        write_json(&meta, Some(&sibling(base, ".meta.json")))?;
        if args.plots {
            write_bench_plots(&cfg, &result.records, base)?;
        }
    }
    Ok(())
}

fn write_bench_plots(cfg: &ExperimentConfig, records: &[bench::BenchRecord], base: &Path) -> Result<()> {
    let mut curves_csv = String::from("algorithm,center,mean,ci_low,ci_high,count\n");
    let mut series = Vec::new();
    for a in &cfg.algorithms {
        let field = format!("sid_{}", a.name());
        let pts: Vec<(f64, f64)> = records.iter().filter_map(|r| Some((r.v_r2, r.field(&field)?))).collect();
        let curve = window_average(&pts, &cfg.window);
        for p in &curve {
            curves_csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                a.name(),
                p.center,
                p.mean,
                p.ci_low,
                p.ci_high,
                p.count
            ));
        }
        series.push((a.name(), curve));
    }
    fs::write(sibling(base, ".curves.csv"), curves_csv)?;
    let plotted: Vec<bench::svg::Series<'_>> = series
        .iter()
        .map(|(label, curve)| bench::svg::Series {
            label,
            points: curve.iter().map(|p| (p.center, p.mean)).collect(),
            band: Some(curve.iter().map(|p| (p.ci_low, p.ci_high)).collect()),
        })
        .collect();
    fs::write(sibling(base, ".sid.svg"), bench::svg::line_plot("SID by R²-sortability", "v_R²", "SID", &plotted))?;
    Ok(())
}

fn chain_cmd(common: &Common, args: &ChainArgs) -> Result<()> {
    let mut cfg: ChainConfig = load_config(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    if let Some(p) = args.p_max {
        cfg.p_max = p;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    let records = chain_experiment(&cfg)?;
    write_chain_csv(&records, output(common.out.as_deref())?)
}

fn sweep_cmd(common: &Common, args: &SweepArgs) -> Result<()> {
    let mut cfg: SweepConfig = load_config(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    let cells = sweep_heatmap(&cfg)?;
    write_sweep_csv(&cells, output(common.out.as_deref())?)?;
    if let (true, Some(base)) = (args.plots, &common.out) {
        for &model in &cfg.graph_models {
            let rows: Vec<String> = cfg.gammas.iter().map(|g| format!("γ={g}")).collect();
            let cols: Vec<String> = cfg.targets.iter().map(|t| format!("{t}")).collect();
            let values: Vec<Vec<f64>> = cfg
                .gammas
                .iter()
                .map(|&g| {
                    cfg.targets
                        .iter()
                        .map(|&t| {
                            cells
                                .iter()
                                .find(|c| c.graph_model == model && c.gamma == g && c.target == t)
                                .map_or(f64::NAN, |c| c.v_r2)
                        })
                        .collect()
                })
                .collect();
            let title = format!("mean R²-sortability, {} graphs, by E[ln|V|]", model.name().to_uppercase());
            fs::write(
                sibling(base, &format!(".{}.svg", model.name())),
                bench::svg::heatmap(&title, &rows, &cols, &values),
            )?;
        }
    }
    Ok(())
}

fn audit_cmd(common: &Common, args: &AuditArgs) -> Result<()> {
    let mut cfg: AuditConfig = load_config(common.config.as_deref())?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(b) = args.bootstrap {
        cfg.bootstrap = b;
    }
    let data = Dataset::read_csv_path(&args.data)?;
    let graph = args.graph.as_deref().map(|p| GraphFile::read(p)?.to_dag()).transpose()?;
    write_json(&audit_dataset(&data, graph.as_ref(), &cfg)?, common.out.as_deref())
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(t) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let c = &cli.common;
    match &cli.command {
        Command::Simulate(a) => simulate(c, a),
        Command::Sortability(a) => sortability_cmd(c, a),
        Command::Discover(a) => discover(c, a),
        Command::Evaluate(a) => evaluate(c, a),
        Command::Bench(a) => bench_cmd(c, a),
        Command::Chain(a) => chain_cmd(c, a),
        Command::Sweep(a) => sweep_cmd(c, a),
        Command::Counterexample => write_json(&counterexample_report()?, c.out.as_deref()),
        Command::Audit(a) => audit_cmd(c, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
