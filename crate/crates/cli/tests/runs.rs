use std::fs;
use std::path::Path;

use clap::Parser;
use serde_json::Value;

use cofix_cli::{run_experiment, ExperimentSpec};

fn spec(out: &Path, args: &[&str]) -> ExperimentSpec {
    let mut argv = vec!["cofix", "--out", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    ExperimentSpec::try_parse_from(argv).expect("valid arguments")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_half3_reaches_origin() {
    let dir = tempfile::tempdir().unwrap();
    let files = run_experiment(&spec(dir.path(), &["solve"])).unwrap();
    assert!(files.iter().any(|f| f.ends_with("solve_trace.csv")));
    let v = read_json(&dir.path().join("solve.json"));
    for c in v["point"].as_array().unwrap() {
        assert!(c.as_f64().unwrap().abs() <= 1e-9);
    }
    assert!(v["lambda_feasibility"]["feasible"].is_boolean());
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for args in [&["--seed", "3", "cover"][..], &["--config", "l1triple", "walk", "--target", "2,1,0"][..], &["mu-estimate"][..]] {
        let fa = run_experiment(&spec(a.path(), args)).unwrap();
        let fb = run_experiment(&spec(b.path(), args)).unwrap();
        assert_eq!(fa.len(), fb.len());
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
    }
}

#[test]
fn fni_scan_half3_has_no_violations() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["--window", "4", "fni-scan"])).unwrap();
    let v = read_json(&dir.path().join("fni.json"));
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["report"]["violations"].as_array().unwrap().len(), 0);
    let csv = fs::read_to_string(dir.path().join("window_rho.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "index_1,index_2,index_3,rho,argmax_direction");
    assert_eq!(csv.lines().count(), 1 + 125);
}

#[test]
fn cover_on_random_k100_is_small() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["--seed", "7", "cover", "--vertices", "100"])).unwrap();
    let v = read_json(&dir.path().join("cover.json"));
    for key in ["diam_a", "diam_b"] {
        let d = v["cover"][key].as_u64().expect("finite diameter");
        assert!(d <= 8, "{key} = {d}");
    }
}

#[test]
fn cover_reads_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "0 1 1\n0 2 2\n1 2 3\n").unwrap();
    run_experiment(&spec(dir.path(), &["cover", "--graph", graph.to_str().unwrap()])).unwrap();
    let v = read_json(&dir.path().join("cover.json"));
    assert_eq!(v["vertices"], 3);
}

#[test]
fn constants_report_far_case_binding() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["--lambda", "1e-23", "constants"])).unwrap();
    let v = read_json(&dir.path().join("constants.json"));
    assert_eq!(v["binding"], "far-case");
    assert_eq!(v["lambda_feasibility"]["feasible"], Value::Bool(true));

    run_experiment(&spec(dir.path(), &["--lambda", "1e-22", "constants"])).unwrap();
    let v = read_json(&dir.path().join("constants.json"));
    assert_eq!(v["lambda_feasibility"]["feasible"], Value::Bool(false));
}

#[test]
fn ck_search_k2_finds_three() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["ck-search", "--k", "2", "--max-n", "6"])).unwrap();
    let v = read_json(&dir.path().join("ck_search.json"));
    assert_eq!(v["min_passing_C"], 3);
}

#[test]
fn diagram_and_catalog_are_written() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["--config", "l1triple", "diagram", "--center", "1,1,1", "--catalog"])).unwrap();
    let d = read_json(&dir.path().join("diagram.json"));
    assert_eq!(d["center"], serde_json::json!([1, 1, 1]));
    let c = read_json(&dir.path().join("catalog.json"));
    assert_eq!(c["admissible"].as_array().unwrap().len(), 33);
}

#[test]
fn trivialize_constant_and_violator() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(dir.path(), &["trivialize", "--coloring", "constant2"])).unwrap();
    let v = read_json(&dir.path().join("trivialize.json"));
    assert!(v["outcome"].to_string().contains("Window") || v["outcome"].to_string().contains("window"));
    run_experiment(&spec(dir.path(), &["trivialize", "--coloring", "diagonal"])).unwrap();
    let v = read_json(&dir.path().join("trivialize.json"));
    assert!(v["outcome"].to_string().to_lowercase().contains("violation"));
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_experiment(&spec(dir.path(), &["--config", "no-such-family", "solve"])).unwrap_err();
    assert_eq!(err.kind(), "config");
    assert_eq!(err.report()["error"], "config");
}

#[test]
fn bad_lambda_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_experiment(&spec(dir.path(), &["--lambda", "abc", "constants"])).unwrap_err();
    assert_eq!(err.kind(), "lambda");
}

#[test]
fn binary_writes_error_json_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_cofix"))
        .args(["--out", dir.path().to_str().unwrap(), "--config", "no-such-family", "solve"])
        .output()
        .unwrap();
    assert!(!status.status.success());
    let v = read_json(&dir.path().join("error.json"));
    assert_eq!(v["error"], "config");
}
