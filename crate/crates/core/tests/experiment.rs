use std::fs;
use std::path::Path;

use opinet::analysis::GroupState;
use opinet::experiment::scenario::{MANIFEST_FILE, NETWORK_FILE, REPORT_FILE, TRAJECTORY_FILE};
use opinet::experiment::{run_figure, run_scenario, ExperimentConfig, FigureId, Overrides, RunManifest};
use opinet::graph::make_star;
use serde_json::Value;

const SCHEMA: &str = include_str!("../schemas/analysis.schema.json");

fn validator() -> jsonschema::Validator {
    jsonschema::validator_for(&serde_json::from_str(SCHEMA).unwrap()).unwrap()
}

fn assert_valid(report_json: &str) {
    let v: Value = serde_json::from_str(report_json).unwrap();
    let validator = validator();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

/// Fill colours of the agent circles, in agent order.
fn fills(svg: &str) -> Vec<(u8, u8, u8)> {
    svg.lines()
        .filter(|l| l.starts_with("<circle"))
        .map(|l| {
            let i = l.find("fill=\"#").unwrap() + 7;
            let hex = |k: usize| u8::from_str_radix(&l[i + k..i + k + 2], 16).unwrap();
            (hex(0), hex(2), hex(4))
        })
        .collect()
}

fn hue(c: (u8, u8, u8)) -> i32 {
    (c.0 as i32 - c.2 as i32).signum()
}

fn zero_config() -> ExperimentConfig {
    ExperimentConfig::from_json(
        r#"{
            "name": "quiet",
            "graph": {"generator": {"family": "cycle", "n": 6}},
            "params": {"d": 1.0, "alpha": 1.0, "gamma": 1.0},
            "mode": {"fixed": {"u": 0.0}},
            "bias": {"uniform": 0.0},
            "initial": {"distribution": "zero", "seed": 0},
            "horizon": {"t_end": 20.0, "dt": 0.01, "stride": 1.0}
        }"#,
    )
    .unwrap()
}

#[test]
fn quiet_scenario_draws_white() {
    let out = run_scenario(&zero_config(), Path::new(".")).unwrap();
    assert!(out.trajectory.samples.iter().all(|s| s.x.iter().all(|v| *v == 0.0)));
    assert!(fills(&out.svg).iter().all(|c| *c == (255, 255, 255)));
    assert_eq!(out.report.classification.label, GroupState::Neutral);
    assert_valid(&out.report.to_json());
}

#[test]
fn figure_one_panels() {
    let fig = run_figure(FigureId::Fig1, &Overrides::default()).unwrap();
    assert_eq!(fig.panels.len(), 8);

    let cycle = fills(&fig.panel("cycle-agreement").unwrap().svg);
    assert!(cycle.iter().all(|c| hue(*c) == hue(cycle[0]) && hue(*c) != 0));

    let star = fills(&fig.panel("star-disagreement").unwrap().svg);
    assert!(hue(star[0]) != 0);
    assert!(star[1..].iter().all(|c| hue(*c) == -hue(star[0])));

    for p in &fig.panels {
        assert_valid(&p.report.to_json());
        let expected = if p.config.params.gamma > 0.0 { GroupState::Agreement } else { GroupState::Disagreement };
        assert_eq!(p.report.classification.label, expected, "{}", p.config.name);
        if let Some(order) = &p.report.centrality_order {
            assert!(order.ok, "{}: {:?}", p.config.name, order.violations);
        }
        if let Some(signs) = p.report.bipartite_signs {
            assert!(signs, "{}", p.config.name);
        }
    }
}

#[test]
fn every_figure_report_matches_the_schema() {
    for id in [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4] {
        let fig = run_figure(id, &Overrides::default()).unwrap();
        for p in &fig.panels {
            assert_valid(&p.report.to_json());
        }
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let out = run_scenario(&zero_config(), Path::new(".")).unwrap();
    let mut v: Value = serde_json::from_str(&out.report.to_json()).unwrap();
    v["classification"]["label"] = Value::from("confused");
    assert!(!validator().is_valid(&v));
    let mut v: Value = serde_json::from_str(&out.report.to_json()).unwrap();
    v.as_object_mut().unwrap().remove("residual");
    assert!(!validator().is_valid(&v));
}

#[test]
fn bundles_are_byte_identical_across_runs() {
    let mut cfg = FigureId::Fig3.configs().unwrap().remove(0);
    cfg.horizon.t_end = 50.0;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_scenario(&cfg, Path::new(".")).unwrap().write(a.path()).unwrap();
    run_scenario(&cfg, Path::new(".")).unwrap().write(b.path()).unwrap();
    for f in [TRAJECTORY_FILE, REPORT_FILE, NETWORK_FILE, MANIFEST_FILE] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let manifest: RunManifest = serde_json::from_slice(&fs::read(a.path().join(MANIFEST_FILE)).unwrap()).unwrap();
    assert_eq!(manifest.config, cfg);
    assert_eq!(manifest.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn seed_override_changes_the_initial_state() {
    let cfg = FigureId::Fig1.configs().unwrap().remove(0);
    let mut other = cfg.clone();
    Overrides { seed: Some(99), ..Overrides::default() }.apply(&mut other);
    let a = cfg.resolve(Path::new(".")).unwrap().x0;
    let b = other.resolve(Path::new(".")).unwrap().x0;
    assert_ne!(a, b);
}

#[test]
fn graph_files_resolve_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    make_star(5).unwrap().save(dir.path().join("star.json")).unwrap();
    let text = r#"{
        "name": "from-file",
        "graph": {"file": "star.json"},
        "params": {"d": 1.0, "alpha": 1.2, "gamma": -1.3},
        "mode": {"above_threshold": {"offset": 0.02}},
        "initial": {"distribution": {"uniform": {"low": -1.0, "high": 1.0}}, "seed": 4},
        "horizon": {"t_end": 300.0, "dt": 0.01, "stride": 1.0}
    }"#;
    let cfg = ExperimentConfig::from_json(text).unwrap();
    let out = run_scenario(&cfg, dir.path()).unwrap();
    assert_eq!(out.report.n_agents, 5);
    assert_eq!(out.report.bipartite_signs, Some(true));
    assert!(run_scenario(&cfg, Path::new("/nonexistent")).unwrap_err().to_string().contains("graph.file"));
}

#[test]
fn figure_output_layout() {
    let dir = tempfile::tempdir().unwrap();
    let fig = run_figure(FigureId::Fig3, &Overrides { t_end: Some(20.0), ..Overrides::default() }).unwrap();
    fig.write(dir.path()).unwrap();
    let summary: Value = serde_json::from_slice(&fs::read(dir.path().join("fig3/summary.json")).unwrap()).unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 2);
    for name in ["tree-central-input", "tree-leaf-input"] {
        for f in [TRAJECTORY_FILE, REPORT_FILE, NETWORK_FILE, MANIFEST_FILE] {
            assert!(dir.path().join("fig3").join(name).join(f).is_file());
        }
    }
}
