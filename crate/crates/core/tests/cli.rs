use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn opinet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opinet"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const SCENARIO: &str = r#"{
  "name": "path-disagreement",
  "graph": {"file": "path.json"},
  "params": {"d": 1.0, "alpha": 1.2, "gamma": -1.3},
  "mode": {"fixed": {"u": 0.4}},
  "initial": {"distribution": {"uniform": {"low": -1.0, "high": 1.0}}, "seed": 5},
  "horizon": {"t_end": 200.0, "dt": 0.01, "stride": 1.0}
}"#;

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("path.json"),
        r#"{"directed": false, "n": 4, "edges": [[1, 2], [2, 3], [3, 4]]}"#,
    )
    .unwrap();
    fs::write(dir.path().join("scenario.json"), SCENARIO).unwrap();
    dir
}

#[test]
fn spectrum_prints_json() {
    let dir = workspace();
    let v = stdout_json(&opinet(&["spectrum", "--graph", "path.json"], dir.path()));
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((v["lambda_max"].as_f64().unwrap() - golden).abs() < 1e-12);
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 4);
    assert_eq!(v["mult_min"], 1);
    let from_config = stdout_json(&opinet(&["spectrum", "--config", "scenario.json"], dir.path()));
    assert_eq!(v, from_config);
}

#[test]
fn orbits_prints_one_based_classes() {
    let dir = workspace();
    let v = stdout_json(&opinet(&["orbits", "--graph", "path.json"], dir.path()));
    assert_eq!(v["group_order"], 2);
    assert_eq!(v["orbits"], serde_json::json!([[1, 4], [2, 3]]));
}

#[test]
fn simulate_then_analyze_round_trip() {
    let dir = workspace();
    let out = opinet(&["simulate", "--config", "scenario.json", "--out", "run"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("run");
    for f in ["trajectory.csv", "analysis.json", "network.svg", "manifest.json"] {
        assert!(run.join(f).is_file(), "{f}");
    }
    let header = fs::read_to_string(run.join("trajectory.csv")).unwrap();
    assert!(header.starts_with("t,x_1,x_2,x_3,x_4\n"));

    let written: Value = serde_json::from_slice(&fs::read(run.join("analysis.json")).unwrap()).unwrap();
    let again = stdout_json(&opinet(
        &["analyze", "--config", "scenario.json", "--trajectory", "run/trajectory.csv"],
        dir.path(),
    ));
    assert_eq!(written, again);
    assert_eq!(again["classification"]["label"], "disagreement");
    assert_eq!(again["bipartite_signs"], true);
}

#[test]
fn overrides_reach_the_run() {
    let dir = workspace();
    let args = ["simulate", "--config", "scenario.json", "--seed", "8", "--dt", "0.02", "--t-end", "10", "--out", "short"];
    assert!(opinet(&args, dir.path()).status.success());
    let manifest: Value = serde_json::from_slice(&fs::read(dir.path().join("short/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["initial"]["seed"], 8);
    assert_eq!(manifest["config"]["horizon"]["dt"], 0.02);
    let csv = fs::read_to_string(dir.path().join("short/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = workspace();
    for out in ["a", "b"] {
        assert!(opinet(&["simulate", "--config", "scenario.json", "--out", out], dir.path()).status.success());
    }
    for f in ["trajectory.csv", "analysis.json", "network.svg", "manifest.json"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap()
        );
    }
}

#[test]
fn config_errors_name_the_field() {
    let dir = workspace();
    fs::write(dir.path().join("bad.json"), SCENARIO.replace("\"d\": 1.0", "\"d\": -1.0")).unwrap();
    let out = opinet(&["simulate", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.d"));

    let out = opinet(&["simulate", "--config", "scenario.json", "--t-end", "10.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}

#[test]
fn analyze_rejects_mismatched_trajectories() {
    let dir = workspace();
    fs::write(dir.path().join("short.csv"), "t,x_1,x_2\n0,0.1,0.2\n1,0.1,0.2\n").unwrap();
    let out = opinet(&["analyze", "--config", "scenario.json", "--trajectory", "short.csv"], dir.path());
    assert!(!out.status.success());
}

#[test]
fn figure_subcommand_writes_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let out = opinet(&["figure", "fig3", "--out", "figs", "--t-end", "30"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("figs/fig3/tree-central-input/network.svg").is_file());
    assert!(dir.path().join("figs/fig3/summary.json").is_file());
    let bad = opinet(&["figure", "fig9"], dir.path());
    assert!(!bad.status.success());
}
