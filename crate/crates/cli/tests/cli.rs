use std::fs;
use std::path::Path;

use clap::Parser;
use treefit::graphs::random::{euclidean_metric, weighted_tree_metric};
use treefit::metricspace::binomial;
use treefit::oracle::{avg_hyp1_by_enumeration, ultrametricity_l1_by_enumeration};
use treefit::{hcc_ultra_fit, BenchSummary, DistanceMatrix, FitReport};
use treefit_cli::{random_base, run, Cli};

fn treefit(args: &[&str]) -> anyhow::Result<String> {
    let cli = Cli::try_parse_from(std::iter::once("treefit").chain(args.iter().copied()))?;
    let mut out = Vec::new();
    run(cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn write_matrix(dir: &Path, name: &str, d: &DistanceMatrix) -> String {
    let path = dir.join(name);
    d.write_csv(&path).unwrap();
    path.to_str().unwrap().to_string()
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|v| v.split_whitespace().next()).map(|v| v.parse().unwrap()))
        .unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

fn seven_point() -> DistanceMatrix {
    let r = [
        [0., 9., 9., 8., 10., 8., 7.],
        [9., 0., 1., 2., 5., 5., 4.],
        [9., 1., 0., 4., 7., 4., 6.],
        [8., 2., 4., 0., 7., 1., 2.],
        [10., 5., 7., 7., 0., 2., 2.],
        [8., 5., 4., 1., 2., 0., 1.],
        [7., 4., 6., 2., 2., 1., 0.],
    ];
    DistanceMatrix::from_fn(7, |i, j| r[i][j])
}

#[test]
fn fit_prints_the_rooted_fixture_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &seven_point());
    let out_dir = dir.path().join("fit");
    let out = treefit(&[
        "fit", "--input", &input, "--algorithm", "hcc", "--root", "0", "--check", "--out", out_dir.to_str().unwrap(),
    ])
    .unwrap();
    let table: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("fitted")).skip(1).take(7).map(str::trim).collect();
    assert_eq!(
        table,
        [
            "0 9 9 8 10 8 7",
            "9 0 1 4 7 5 4",
            "9 1 0 4 7 5 4",
            "8 4 4 0 6 4 3",
            "10 7 7 6 0 2 3",
            "8 5 5 4 2 0 1",
            "7 4 4 3 3 1 0",
        ]
    );
    assert!(out.contains(": ok"));

    // The report recomputes exactly from the emitted fitted matrix.
    let report: FitReport = serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    let fitted = DistanceMatrix::read_csv(out_dir.join("fitted.csv")).unwrap();
    let again = FitReport::from_matrices(&report.algorithm, &seven_point(), &fitted);
    assert_eq!((report.l1_total, report.l1_avg, report.linf), (again.l1_total, again.l1_avg, again.linf));
    assert_eq!(report.base, Some(0));
    assert!(report.bound.is_some());
    let tree = treefit::WeightedTree::from_edge_list_str(&fs::read_to_string(out_dir.join("tree.txt")).unwrap()).unwrap();
    assert!(tree.path_metric().linf_distance(&fitted) < 1e-12);
}

#[test]
fn tree_inputs_fit_with_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "tree.csv", &weighted_tree_metric(14, 5));
    for (alg, root) in [("hcc", "3"), ("hcc", "best"), ("gromov", "random"), ("nj", "random")] {
        let out = treefit(&["fit", "--input", &input, "--algorithm", alg, "--root", root, "--check"]).unwrap();
        assert!(field(&out, "l1_total") < 1e-9, "{alg}: {out}");
    }
    let (u, _) = hcc_ultra_fit(&euclidean_metric(10, 2, 1));
    let ultra = write_matrix(dir.path(), "ultra.csv", &u.matrix);
    for (alg, root) in [("slhc", "random"), ("hcc", "none")] {
        let out = treefit(&["fit", "--input", &ultra, "--algorithm", alg, "--root", root, "--check"]).unwrap();
        assert_eq!(field(&out, "l1_total"), 0.0, "{alg}");
    }
}

#[test]
fn best_root_respects_the_average_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = euclidean_metric(50, 3, 11);
    let input = write_matrix(dir.path(), "d.csv", &d);
    let out = treefit(&["fit", "--input", &input, "--root", "best", "--check"]).unwrap();
    let bound = 8.0 * binomial(49, 3) as f64 * avg_hyp1_by_enumeration(&d);
    assert!(field(&out, "l1_total") <= bound + 1e-9);
}

#[test]
fn every_algorithm_passes_its_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &euclidean_metric(20, 2, 4));
    for alg in ["hcc", "gromov", "nj", "slhc"] {
        for seed in ["0", "1", "2"] {
            treefit(&["fit", "--input", &input, "--algorithm", alg, "--seed", seed, "--check"]).unwrap();
        }
    }
}

#[test]
fn random_root_follows_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &euclidean_metric(30, 2, 2));
    let out = treefit(&["fit", "--input", &input, "--seed", "7"]).unwrap();
    assert_eq!(field(&out, "base") as usize, random_base(7, 30));
    assert_eq!(out.lines().filter(|l| !l.starts_with("time")).collect::<Vec<_>>(), treefit(&["fit", "--input", &input, "--seed", "7"]).unwrap().lines().filter(|l| !l.starts_with("time")).collect::<Vec<_>>());
}

#[test]
fn fit_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &euclidean_metric(6, 2, 0));
    assert!(treefit(&["fit", "--input", &input, "--algorithm", "upgma"]).is_err());
    assert!(treefit(&["fit", "--input", &input, "--root", "6"]).is_err());
    assert!(treefit(&["fit", "--input", &input, "--root", "north"]).is_err());
    assert!(treefit(&["fit", "--input", &input, "--algorithm", "gromov", "--root", "best"]).is_err());

    let graph = dir.path().join("g.txt");
    fs::write(&graph, "a b\nb c\nx y\n").unwrap();
    let g = graph.to_str().unwrap();
    assert!(treefit(&["metrics", "--input", g]).is_err());
    let out = treefit(&["metrics", "--input", g, "--largest-component"]).unwrap();
    assert_eq!(field(&out, "n") as usize, 3);
}

#[test]
fn metrics_match_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let d = euclidean_metric(10, 2, 3);
    let input = write_matrix(dir.path(), "d.csv", &d);
    let out = treefit(&["metrics", "--input", &input, "--json"]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let avg_hyp = avg_hyp1_by_enumeration(&d);
    assert!((v["avg_hyp_1"].as_f64().unwrap() - avg_hyp).abs() < 1e-12);
    let avg_um = ultrametricity_l1_by_enumeration(&d) / binomial(10, 3) as f64;
    assert!((v["avg_um_1"].as_f64().unwrap() - avg_um).abs() < 1e-12);
    let bound = 8.0 * binomial(9, 3) as f64 * avg_hyp / binomial(10, 2) as f64;
    assert!((v["bound"].as_f64().unwrap() - bound).abs() < 1e-9);

    let tree = write_matrix(dir.path(), "t.csv", &weighted_tree_metric(12, 1));
    let out = treefit(&["metrics", "--input", &tree]).unwrap();
    for key in ["Hyp", "AvgHyp_1", "Bound"] {
        assert!(field(&out, key).abs() < 1e-9, "{key}: {out}");
    }
}

#[test]
fn metrics_require_sampling_on_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    let edges: String = (0..300).map(|i| format!("{i} {}\n", i + 1)).collect();
    fs::write(&path, edges).unwrap();
    let p = path.to_str().unwrap();
    assert!(treefit(&["metrics", "--input", p]).is_err());
    let out = treefit(&["metrics", "--input", p, "--sample", "20000", "--seed", "3"]).unwrap();
    assert_eq!(field(&out, "Hyp"), 0.0);
}

#[test]
fn bench_summary_matches_per_run_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &euclidean_metric(25, 2, 8));
    let out_dir = dir.path().join("bench");
    let out = treefit(&[
        "bench", "--input", &input, "--runs", "5", "--algorithm", "hcc,gromov,nj,slhc", "--out", out_dir.to_str().unwrap(),
    ])
    .unwrap();
    assert!(out.starts_with("algorithm"));
    let runs: Vec<FitReport> = fs::read_to_string(out_dir.join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summaries: Vec<BenchSummary> =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    let count = |name: &str| runs.iter().filter(|r| r.algorithm == name).count();
    assert_eq!((count("hcc"), count("gromov"), count("nj"), count("slhc")), (5, 5, 1, 1));
    let hcc_seeds: Vec<u64> = runs.iter().filter(|r| r.algorithm == "hcc").map(|r| r.seed.unwrap()).collect();
    assert_eq!(hcc_seeds, [0, 1, 2, 3, 4]);
    for s in &summaries {
        let group: Vec<FitReport> = runs.iter().filter(|r| r.algorithm == s.algorithm).cloned().collect();
        assert_eq!(&BenchSummary::from_reports(&group).unwrap(), s);
    }
    let nj = summaries.iter().find(|s| s.algorithm == "nj").unwrap();
    assert_eq!((nj.runs, nj.l1_avg_sd, nj.linf_sd), (1, 0.0, 0.0));
}

#[test]
fn bench_rejects_zero_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "d.csv", &euclidean_metric(6, 2, 0));
    assert!(treefit(&["bench", "--input", &input, "--runs", "0"]).is_err());
}

#[test]
fn synthetic_bench_roots_at_the_apex() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("synth-bench");
    treefit(&[
        "bench", "--synthetic", "2,4", "--n-e", "10", "--runs", "3", "--algorithm", "hcc,gromov", "--out",
        out_dir.to_str().unwrap(),
    ])
    .unwrap();
    let runs: Vec<FitReport> = fs::read_to_string(out_dir.join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(runs.len(), 6);
    assert!(runs.iter().all(|r| r.base == Some(0) && r.n == 31));
}

#[test]
fn synth_is_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        treefit(&["synth", "--branching", "2", "--height", "8", "--n-e", "40", "--seed", "5", "--out", out.to_str().unwrap()])
            .unwrap();
    }
    for file in ["graph.txt", "distances.csv"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap());
    }
    let d = DistanceMatrix::read_csv(a.join("distances.csv")).unwrap();
    assert_eq!(d.n(), 511);
    let reloaded = treefit(&["metrics", "--input", a.join("graph.txt").to_str().unwrap(), "--sample", "1000"]).unwrap();
    assert_eq!(field(&reloaded, "n") as usize, 511);

    let pure = dir.path().join("pure");
    treefit(&["synth", "--branching", "3", "--height", "2", "--n-e", "0", "--out", pure.to_str().unwrap()]).unwrap();
    let out = treefit(&["metrics", "--input", pure.join("distances.csv").to_str().unwrap()]).unwrap();
    assert_eq!(field(&out, "Hyp"), 0.0);
    assert!(treefit(&["synth", "--branching", "1", "--height", "3", "--out", pure.to_str().unwrap()]).is_err());
}
