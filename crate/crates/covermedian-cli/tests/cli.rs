//! End-to-end checks of the command-line surface: exit codes, report
//! round-trips, and reproducibility.

use covermedian_cli::dataset::parse_dataset;
use covermedian_cli::{cmd_bench, cmd_cluster, cmd_validate, BenchOptions, ClusterOptions};
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covermedian"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("covermedian-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn quick_opts(input: PathBuf, k: usize, l: usize) -> ClusterOptions {
    let mut opts = ClusterOptions::new(input, k, l, 0.4, 0.95);
    opts.subset_budget = "2".to_string();
    opts.repetitions = Some(1);
    opts.cover_sample_size = 128;
    opts.max_candidates = 8;
    opts
}

#[test]
fn validate_accepts_fixture() {
    let out = bin().arg("validate").arg(fixture("traj-2cluster.jsonl")).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"trajectory\""));
    assert!(text.contains("\"records\": 30"));
}

#[test]
fn validate_rejects_mixed_dimension_with_exit_2() {
    let path = write_temp(
        "mixed-dim.jsonl",
        "{\"id\":\"a\",\"kind\":\"pointset\",\"points\":[[0.0,0.0]]}\n{\"id\":\"b\",\"kind\":\"pointset\",\"points\":[[1.0]]}\n",
    );
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains('b'), "offending record must be named: {stderr}");
}

#[test]
fn validate_rejects_duplicate_ids_with_exit_2() {
    let path = write_temp(
        "dup-id.jsonl",
        "{\"id\":\"a\",\"kind\":\"pointset\",\"points\":[[0.0]]}\n{\"id\":\"a\",\"kind\":\"pointset\",\"points\":[[1.0]]}\n",
    );
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate id"));
}

#[test]
fn parse_error_reports_line_number_with_exit_2() {
    let path = write_temp("bad-json.jsonl", "{\"id\":\"a\",\"kind\":\"trajectory\",\"points\":[[0.0]]}\nnot json\n");
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_parameter_range_exits_3_naming_the_constraint() {
    let out = bin()
        .arg("cluster")
        .arg(fixture("traj-2cluster.jsonl"))
        .args(["--k", "2", "--l", "2", "--epsilon", "0.6", "--delta", "0.95"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("epsilon"), "constraint must be named: {stderr}");
    assert!(stderr.contains("4/9"), "range must be shown: {stderr}");
}

#[test]
fn loose_flag_lifts_the_range_check() {
    let path = write_temp(
        "single.jsonl",
        "{\"id\":\"only\",\"kind\":\"trajectory\",\"points\":[[0.0,0.0],[1.0,0.0]]}\n",
    );
    let out = bin()
        .arg("cluster")
        .arg(&path)
        .args(["--k", "1", "--l", "2", "--epsilon", "0.6", "--delta", "0.95"])
        .args(["--allow-loose-params", "--repetitions", "1", "--subset-budget", "1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn single_trajectory_is_its_own_center_at_zero_cost() {
    let path = write_temp(
        "own-center.jsonl",
        "{\"id\":\"only\",\"kind\":\"trajectory\",\"points\":[[0.25,0.5],[1.0,-0.125]]}\n",
    );
    let report = cmd_cluster(&quick_opts(path, 1, 2)).unwrap();
    assert_eq!(report.total_cost, 0.0);
    assert_eq!(report.centers.len(), 1);
    assert_eq!(report.centers[0].points, vec![vec![0.25, 0.5], vec![1.0, -0.125]]);
    assert_eq!(report.assignment[0].center_index, 0);
    assert_eq!(report.assignment[0].distance, 0.0);
}

#[test]
fn report_is_reproducible_and_centers_reingest() {
    let opts = {
        let mut o = quick_opts(fixture("traj-2cluster.jsonl"), 2, 2);
        o.seed = 4242;
        o
    };
    let a = cmd_cluster(&opts).unwrap();
    let b = cmd_cluster(&opts).unwrap();
    assert_eq!(
        a.canonical().to_json(),
        b.canonical().to_json(),
        "same input + seed must reproduce the report byte for byte (timing aside)"
    );

    // emitted centers parse back as a dataset of the same kind
    let lines: Vec<String> = a
        .centers
        .iter()
        .map(|r| serde_json::to_string(r).unwrap())
        .collect();
    let ds = parse_dataset(&lines.join("\n")).unwrap();
    assert_eq!(ds.len(), a.centers.len());
    assert_eq!(ds.kind.as_str(), "trajectory");

    // report cost equals an independent recomputation from the emitted centers
    let space = covermedian::TrajectorySpace::new(2).unwrap();
    let input = covermedian_cli::dataset::load_dataset(&fixture("traj-2cluster.jsonl")).unwrap();
    let recomputed =
        covermedian::evaluate_cost(&space, &input.trajectories, &ds.trajectories).unwrap();
    let rel = (recomputed - a.total_cost).abs() / recomputed.abs().max(1.0);
    assert!(rel <= 1e-6, "report cost {} vs recomputed {recomputed}", a.total_cost);
}

#[test]
fn cluster_cost_stays_under_fixture_grid_bound() {
    let meta = covermedian_cli::fixtures::FixtureMeta::load(&fixture("traj-2cluster.meta.json")).unwrap();
    let mut hits = 0;
    for seed in 0..5 {
        let opts = {
            let mut o = quick_opts(fixture("traj-2cluster.jsonl"), meta.k, meta.l);
            o.seed = seed;
            o
        };
        let report = cmd_cluster(&opts).unwrap();
        let bound = (1.0 + 3.0 * 0.4) * (meta.grid_cost + meta.grid_slack);
        if report.total_cost <= bound {
            hits += 1;
        }
    }
    assert!(hits >= 4, "only {hits}/5 seeds within the recorded grid bound");
}

#[test]
fn strong_mode_uses_input_elements_as_centers() {
    let path = write_temp(
        "strong.jsonl",
        concat!(
            "{\"id\":\"a\",\"kind\":\"pointset\",\"points\":[[0.0,0.0]]}\n",
            "{\"id\":\"b\",\"kind\":\"pointset\",\"points\":[[0.4,0.0]]}\n",
            "{\"id\":\"c\",\"kind\":\"pointset\",\"points\":[[10.0,0.0]]}\n",
        ),
    );
    let mut opts = quick_opts(path, 2, 1);
    opts.mode = covermedian_cli::ModeOpt::Strong;
    opts.subset_budget = "exhaustive".to_string();
    let report = cmd_cluster(&opts).unwrap();
    // optimum: {a or b} plus {c}, cost 0.4
    assert!((report.total_cost - 0.4).abs() < 1e-9, "cost {}", report.total_cost);
}

#[test]
fn bench_single_row_sweep() {
    let opts = BenchOptions {
        cluster: quick_opts(fixture("traj-2cluster.jsonl"), 2, 2),
        sizes: vec![30],
        bench_seeds: 1,
    };
    let report = cmd_bench(&opts).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.medians.len(), 1);
    assert_eq!(report.medians[0].n, 30);
    assert!(report.rows[0].distance_evals > 0);
    assert!(report.rows[0].projection_evals > 0);
}

#[test]
fn bench_rejects_oversized_prefix() {
    let opts = BenchOptions {
        cluster: quick_opts(fixture("traj-2cluster.jsonl"), 2, 2),
        sizes: vec![1000],
        bench_seeds: 1,
    };
    let err = cmd_bench(&opts).unwrap_err();
    assert_eq!(err.code, 2);
}

#[test]
fn validate_summary_in_process() {
    let summary = cmd_validate(&fixture("ps-3cluster.jsonl")).unwrap();
    assert_eq!(summary.kind, "pointset");
    assert_eq!(summary.records, 36);
    assert_eq!(summary.dimension, 2);
}
