//! `treefit` command-line front end.
//!
//! Four subcommands: `metrics` (hyperbolicity / ultrametricity summaries),
//! `fit` (one fit with artifacts), `bench` (seeded repeated runs with a
//! mean ± sd table) and `synth` (perturbed balanced trees).
//!
//! Every command writes human-readable output to the supplied writer and
//! machine-readable artifacts (CSV, edge lists, JSON) under `--out`.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treefit::baselines::{gromov_tree_fit, neighbor_join, single_linkage_ultrametric};
use treefit::fit::dendrogram_tree;
use treefit::graphs::{
    balanced_tree, largest_component, parse_edge_list, perturb_tree, shortest_path_matrix, SyntheticSpec,
};
use treefit::metricspace::{binomial, hyp_stats, hyperbolicity_l1, hyperbolicity_linf, ultrametricity_vector};
use treefit::oracle::verify_tree_metric;
use treefit::{
    best_base_tree_fit, hcc_rooted_tree_fit, hcc_ultra_fit, BaseStrategy, BenchSummary, DistanceMatrix,
    FitReport, StatsMode, WeightedTree,
};

#[derive(Debug, Parser)]
#[command(name = "treefit", version, about = "Fit ultrametrics and tree metrics to distance data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Hyp, AvgHyp₁, UM, AvgUM₁ and the average-distortion bound.
    Metrics(MetricsArgs),
    /// Run one fitter and write the tree, fitted distances and a JSON report.
    Fit(FitArgs),
    /// Repeat fits over seeds 0..runs and tabulate mean ± sd.
    Bench(BenchArgs),
    /// Generate a perturbed balanced tree and its shortest-path distances.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Edgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Hcc,
    Gromov,
    Nj,
    Slhc,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hcc => "hcc",
            Algorithm::Gromov => "gromov",
            Algorithm::Nj => "nj",
            Algorithm::Slhc => "slhc",
        }
    }

    /// Whether the output depends on a base point.
    pub fn is_rooted(self) -> bool {
        matches!(self, Algorithm::Hcc | Algorithm::Gromov)
    }
}

/// Base point selection for rooted fitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    Index(usize),
    /// Uniform draw from a ChaCha8 stream seeded with `--seed`.
    Random,
    /// Best base by fitted error (HCC only).
    Best,
    /// No base: fit an ultrametric instead (HCC only).
    None,
}

impl FromStr for Root {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Root::Random),
            "best" => Ok(Root::Best),
            "none" => Ok(Root::None),
            _ => s
                .parse()
                .map(Root::Index)
                .map_err(|_| format!("expected a point index, `random`, `best` or `none`, got {s:?}")),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Index(i) => write!(f, "{i}"),
            Root::Random => f.write_str("random"),
            Root::Best => f.write_str("best"),
            Root::None => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Distance CSV or edge list.
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted (`.csv` is a
    /// distance matrix, anything else an edge list).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Restrict an edge list to its largest connected component.
    #[arg(long)]
    pub largest_component: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Estimate averages from this many sampled tuples instead of
    /// enumerating all of them.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the statistics as one JSON object instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Algorithm::Hcc)]
    pub algorithm: Algorithm,
    /// Base point: an index, `random`, `best` (HCC) or `none` (HCC ultrametric).
    #[arg(long, default_value = "random")]
    pub root: Root,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail unless the algorithm's worst-case bound holds.
    #[arg(long)]
    pub check: bool,
    /// Directory for `tree.txt`, `fitted.csv` and `report.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Input data; omit together with `--synthetic`.
    #[arg(long, required_unless_present = "synthetic")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub largest_component: bool,
    /// Algorithms to run (repeat or comma-separate).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Hcc, Algorithm::Gromov, Algorithm::Nj])]
    pub algorithm: Vec<Algorithm>,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    /// First seed; run `k` uses seed `seed + k`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Base point for rooted algorithms. Defaults to a fresh random base
    /// per run, or vertex 0 (the apex) in synthetic mode.
    #[arg(long)]
    pub root: Option<Root>,
    /// Regenerate `BT(r,h)` plus random edges per seed, as `r,h`.
    #[arg(long, value_parser = parse_shape, conflicts_with = "input")]
    pub synthetic: Option<(usize, u32)>,
    #[arg(long, default_value_t = 500)]
    pub n_e: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Directory for `runs.jsonl` and `summary.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Branching factor r of the balanced tree.
    #[arg(long)]
    pub branching: usize,
    /// Height h of the balanced tree.
    #[arg(long)]
    pub height: u32,
    /// Number of extra edges to add.
    #[arg(long, default_value_t = 500)]
    pub n_e: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `graph.txt` and `distances.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_shape(s: &str) -> std::result::Result<(usize, u32), String> {
    let (r, h) = s.split_once(',').ok_or_else(|| format!("expected `r,h`, got {s:?}"))?;
    let r = r.trim().parse().map_err(|e| format!("bad r: {e}"))?;
    let h = h.trim().parse().map_err(|e| format!("bad h: {e}"))?;
    Ok((r, h))
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Metrics(a) => cmd_metrics(&a, out),
        Command::Fit(a) => cmd_fit(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
    }
}

/// Loads a distance matrix; edge lists become shortest-path metrics.
pub fn load_matrix(path: &Path, format: Option<Format>, largest: bool) -> Result<DistanceMatrix> {
    let format = format.unwrap_or_else(|| {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Format::Csv
        } else {
            Format::Edgelist
        }
    });
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let d = match format {
        Format::Csv => DistanceMatrix::from_csv_str(&text)?,
        Format::Edgelist => {
            let mut g = parse_edge_list(&text)?;
            if largest {
                g = largest_component(&g)?;
            }
            shortest_path_matrix(&g).with_context(|| {
                format!("{} is disconnected; pass --largest-component to keep the largest part", path.display())
            })?
        }
    };
    ensure!(d.n() >= 1, "empty input");
    Ok(d)
}

/// The base drawn for `Root::Random` under `seed`.
pub fn random_base(seed: u64, n: usize) -> usize {
    ChaCha8Rng::seed_from_u64(seed).gen_range(0..n)
}

fn ceil_log2(x: usize) -> f64 {
    (x.max(1) as f64).log2().ceil()
}

pub fn cmd_metrics(a: &MetricsArgs, out: &mut impl Write) -> Result<()> {
    let d = load_matrix(&a.input.input, a.input.format, a.input.largest_component)?;
    let mode = match a.sample {
        Some(count) => StatsMode::Sampled { count, seed: a.seed },
        None => StatsMode::Exact,
    };
    let stats = hyp_stats(&d, 1.0, mode).context("use --sample N for large inputs")?;
    if a.json {
        let mut value = serde_json::to_value(&stats)?;
        value["bound"] = stats.tree_fit_bound().into();
        writeln!(out, "{value}")?;
        return Ok(());
    }
    let mode = match stats.sample_count {
        Some(c) => format!("sampled, {c} tuples, seed {}", a.seed),
        None => "exact".into(),
    };
    let pm = |hw: Option<f64>| hw.map(|h| format!(" ± {h:.4}")).unwrap_or_default();
    writeln!(out, "n         {} ({mode})", stats.n)?;
    writeln!(out, "Hyp       {}", stats.hyp)?;
    writeln!(out, "AvgHyp_1  {:.6}{}", stats.avg_hyp_1, pm(stats.hyp_half_width))?;
    writeln!(out, "UM        {}", stats.um)?;
    writeln!(out, "AvgUM_1   {:.6}{}", stats.avg_um_1, pm(stats.um_half_width))?;
    writeln!(out, "Bound     {:.4}", stats.tree_fit_bound())?;
    Ok(())
}

/// Result of one fit: the fitted metric, a tree realizing it and the report.
#[derive(Debug, Clone)]
pub struct Fitted {
    pub tree: WeightedTree,
    pub d_fit: DistanceMatrix,
    pub report: FitReport,
}

/// Runs `algorithm` once. `seed` feeds `Root::Random` and is recorded.
pub fn fit_once(d: &DistanceMatrix, algorithm: Algorithm, root: Root, seed: u64) -> Result<Fitted> {
    let n = d.n();
    let base = || -> Result<usize> {
        match root {
            Root::Index(w) if w < n => Ok(w),
            Root::Index(w) => bail!("root {w} is out of range for n = {n}"),
            Root::Random => Ok(random_base(seed, n)),
            Root::Best | Root::None => bail!("{} needs a base point, not `{root}`", algorithm.name()),
        }
    };
    let ultra = |name: &str, f: fn(&DistanceMatrix) -> (treefit::Ultrametric, treefit::MergeLog)| -> Result<Fitted> {
        let started = Instant::now();
        let (u, log) = f(d);
        let elapsed = started.elapsed().as_secs_f64();
        let report = FitReport::from_matrices(name, d, &u.matrix).with_time(elapsed);
        Ok(Fitted { tree: dendrogram_tree(&log)?, d_fit: u.matrix, report })
    };
    let fitted = match (algorithm, root) {
        (Algorithm::Hcc, Root::None) => ultra("hcc-ultra", hcc_ultra_fit)?,
        (Algorithm::Hcc, Root::Best) => {
            let f = best_base_tree_fit(d, BaseStrategy::MinError)?;
            Fitted { tree: f.tree, d_fit: f.d_t, report: f.report }
        }
        (Algorithm::Hcc, _) => {
            let f = hcc_rooted_tree_fit(d, base()?)?;
            Fitted { tree: f.tree, d_fit: f.d_t, report: f.report }
        }
        (Algorithm::Gromov, _) => {
            let f = gromov_tree_fit(d, base()?)?;
            Fitted { tree: f.tree, d_fit: f.d_t, report: f.report }
        }
        (Algorithm::Nj, _) => {
            let f = neighbor_join(d)?;
            Fitted { tree: f.tree, d_fit: f.d_t, report: f.report }
        }
        (Algorithm::Slhc, _) => ultra("slhc", single_linkage_ultrametric)?,
    };
    let mut fitted = fitted;
    fitted.report.seed = Some(seed);
    Ok(fitted)
}

/// Which error norm a guarantee constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    Linf,
}

/// The worst-case guarantee for a finished fit, if the algorithm has one.
pub fn guarantee(d: &DistanceMatrix, algorithm: Algorithm, root: Root, fit: &Fitted) -> Result<Option<(Norm, f64)>> {
    let n = d.n();
    Ok(match (algorithm, root) {
        (Algorithm::Hcc, Root::None) => Some((Norm::L1, 4.0 * ultrametricity_vector(d).l1())),
        (Algorithm::Hcc, Root::Best) => {
            let stats = hyp_stats(d, 1.0, StatsMode::Exact)?;
            let count = binomial(n.saturating_sub(1) as u64, 3) as f64;
            Some((Norm::L1, 8.0 * count * stats.avg_hyp_1))
        }
        (Algorithm::Hcc, _) => {
            let w = fit.report.base.context("rooted fit without a base")?;
            Some((Norm::L1, 8.0 * hyperbolicity_l1(d, w)?))
        }
        (Algorithm::Gromov, _) => {
            let w = fit.report.base.context("rooted fit without a base")?;
            let bound = 2.0 * hyperbolicity_linf(d, w)? * ceil_log2(n.saturating_sub(2));
            Some((Norm::Linf, bound))
        }
        (Algorithm::Slhc, _) => {
            let bound = ultrametricity_vector(d).linf() * ceil_log2(n.saturating_sub(1));
            Some((Norm::Linf, bound))
        }
        // Exact on tree metrics; no guarantee otherwise.
        (Algorithm::Nj, _) => verify_tree_metric(d, 1e-9).passed.then_some((Norm::L1, 0.0)),
    })
}

/// Relative slack allowed when checking a floating-point guarantee.
const CHECK_TOLERANCE: f64 = 1e-9;

pub fn cmd_fit(a: &FitArgs, out: &mut impl Write) -> Result<()> {
    let d = load_matrix(&a.input.input, a.input.format, a.input.largest_component)?;
    let mut fit = fit_once(&d, a.algorithm, a.root, a.seed)?;
    let r = &fit.report;
    writeln!(out, "algorithm {}", r.algorithm)?;
    if let Some(w) = r.base {
        writeln!(out, "base      {w}")?;
    }
    writeln!(out, "n         {}", r.n)?;
    writeln!(out, "l1_total  {}", r.l1_total)?;
    writeln!(out, "l1_avg    {}", r.l1_avg)?;
    writeln!(out, "linf      {}", r.linf)?;
    writeln!(out, "time      {:.6} s", r.wall_time_seconds)?;

    if a.check {
        match guarantee(&d, a.algorithm, a.root, &fit)? {
            Some((norm, bound)) => {
                let (label, value) = match norm {
                    Norm::L1 => ("l1_total", fit.report.l1_total),
                    Norm::Linf => ("linf", fit.report.linf),
                };
                if norm == Norm::L1 {
                    fit.report.bound = Some(bound);
                }
                let ok = value <= bound + CHECK_TOLERANCE * bound.max(1.0);
                writeln!(out, "check     {label} {value} <= {bound}: {}", if ok { "ok" } else { "VIOLATED" })?;
                ensure!(ok, "{label} = {value} exceeds the guaranteed bound {bound}");
            }
            None => writeln!(out, "check     no guarantee applies to {} on this input", a.algorithm.name())?,
        }
    }

    if fit.d_fit.n() <= 16 {
        writeln!(out, "fitted distances:")?;
        for i in 0..fit.d_fit.n() {
            let row: Vec<String> = fit.d_fit.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(out, "  {}", row.join(" "))?;
        }
    }

    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("tree.txt"), fit.tree.to_edge_list_string())?;
        fit.d_fit.write_csv(dir.join("fitted.csv"))?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&fit.report)? + "\n")?;
        writeln!(out, "wrote tree.txt, fitted.csv, report.json to {}", dir.display())?;
    }
    Ok(())
}

/// One bench run per seed for rooted algorithms; deterministic ones once.
pub fn bench_reports(a: &BenchArgs) -> Result<Vec<FitReport>> {
    ensure!(a.runs >= 1, "--runs must be at least 1");
    let seeds: Vec<u64> = (0..a.runs as u64).map(|k| a.seed + k).collect();
    // Fits run one at a time on a single worker so timings are comparable.
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build()?;
    let mut reports = Vec::new();
    match a.synthetic {
        Some((r, h)) => {
            let tree = balanced_tree(r, h)?;
            let root = a.root.unwrap_or(Root::Index(0));
            for &seed in &seeds {
                let spec = SyntheticSpec { n_e: a.n_e, delta: a.delta, seed };
                let d = shortest_path_matrix(&perturb_tree(&tree, &spec)?)?;
                for &alg in &a.algorithm {
                    reports.push(pool.install(|| fit_once(&d, alg, root, seed))?.report);
                }
            }
        }
        None => {
            let input = a.input.as_deref().context("--input is required without --synthetic")?;
            let d = load_matrix(input, a.format, a.largest_component)?;
            let root = a.root.unwrap_or(Root::Random);
            for &alg in &a.algorithm {
                let alg_seeds = if alg.is_rooted() && root != Root::None { &seeds[..] } else { &seeds[..1] };
                for &seed in alg_seeds {
                    reports.push(pool.install(|| fit_once(&d, alg, root, seed))?.report);
                }
            }
        }
    }
    Ok(reports)
}

/// Groups reports by algorithm, in first-appearance order.
pub fn summarize(reports: &[FitReport]) -> Result<Vec<BenchSummary>> {
    let mut names: Vec<&str> = Vec::new();
    for r in reports {
        if !names.contains(&r.algorithm.as_str()) {
            names.push(&r.algorithm);
        }
    }
    names
        .iter()
        .map(|name| {
            let group: Vec<FitReport> = reports.iter().filter(|r| r.algorithm == *name).cloned().collect();
            Ok(BenchSummary::from_reports(&group)?)
        })
        .collect()
}

pub fn cmd_bench(a: &BenchArgs, out: &mut impl Write) -> Result<()> {
    let reports = bench_reports(a)?;
    let summaries = summarize(&reports)?;
    writeln!(
        out,
        "{:<12} {:>5}  {:>23}  {:>23}  {:>23}",
        "algorithm", "runs", "l1_avg", "linf", "time (s)"
    )?;
    for s in &summaries {
        writeln!(
            out,
            "{:<12} {:>5}  {:>11.5} ± {:<9.5}  {:>11.5} ± {:<9.5}  {:>11.5} ± {:<9.5}",
            s.algorithm, s.runs, s.l1_avg_mean, s.l1_avg_sd, s.linf_mean, s.linf_sd, s.time_mean, s.time_sd
        )?;
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut lines = String::new();
        for r in &reports {
            lines.push_str(&serde_json::to_string(r)?);
            lines.push('\n');
        }
        fs::write(dir.join("runs.jsonl"), lines)?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summaries)? + "\n")?;
        writeln!(out, "wrote runs.jsonl, summary.json to {}", dir.display())?;
    }
    Ok(())
}

pub fn cmd_synth(a: &SynthArgs, out: &mut impl Write) -> Result<()> {
    let spec = SyntheticSpec { n_e: a.n_e, delta: a.delta, seed: a.seed };
    spec.validate()?;
    let tree = balanced_tree(a.branching, a.height)?;
    let g = perturb_tree(&tree, &spec)?;
    let d = shortest_path_matrix(&g)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let header = format!(
        "# BT({},{}) + {} edges, delta {}, seed {}\n",
        a.branching, a.height, a.n_e, a.delta, a.seed
    );
    fs::write(a.out.join("graph.txt"), header + &g.to_edge_list())?;
    d.write_csv(a.out.join("distances.csv"))?;
    writeln!(
        out,
        "n {} vertices, {} edges ({} added); wrote graph.txt, distances.csv to {}",
        g.n(),
        g.edges().len(),
        g.edges().len() - tree.edges().len(),
        a.out.display()
    )?;
    Ok(())
}
