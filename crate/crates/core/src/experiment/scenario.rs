use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, GraphSource, InitialDistribution, ResolvedScenario};
use super::render::{network_svg, Layout};
use super::report::{build_report, AnalysisReport};
use crate::dynamics::{OpinionSystem, Trajectory};
use crate::error::Result;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const REPORT_FILE: &str = "analysis.json";
pub const NETWORK_FILE: &str = "network.svg";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Command-line style overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            cfg.initial.seed = seed;
        }
        if let Some(dt) = self.dt {
            cfg.horizon.dt = dt;
        }
        if let Some(t_end) = self.t_end {
            cfg.horizon.t_end = t_end;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub config: ExperimentConfig,
    pub resolved: ResolvedScenario,
    pub trajectory: Trajectory,
    pub report: AnalysisReport,
    pub svg: String,
}

impl ScenarioOutcome {
    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config.clone(),
            files: [TRAJECTORY_FILE, REPORT_FILE, NETWORK_FILE]
                .map(String::from)
                .to_vec(),
        }
    }

    /// Writes the trajectory, report, drawing and manifest into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        self.trajectory.write_csv(dir.join(TRAJECTORY_FILE))?;
        std::fs::write(dir.join(REPORT_FILE), self.report.to_json())?;
        std::fs::write(dir.join(NETWORK_FILE), &self.svg)?;
        let manifest = serde_json::to_string_pretty(&self.manifest())?;
        std::fs::write(dir.join(MANIFEST_FILE), manifest)?;
        Ok(())
    }
}

fn layout_for(cfg: &ExperimentConfig) -> Layout {
    match &cfg.graph {
        GraphSource::Generator(spec) => Layout::for_generator(Some(spec)),
        GraphSource::File(_) => Layout::for_generator(None),
    }
}

pub fn render(cfg: &ExperimentConfig, resolved: &ResolvedScenario, report: &AnalysisReport) -> String {
    let label = serde_json::to_value(report.classification.label)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    let title = format!("{} (t = {}, {label})", cfg.name, report.final_time);
    network_svg(&resolved.graph, layout_for(cfg), &report.final_state, cfg.theta, &title)
}

/// Resolves, integrates and analyses one scenario. Relative graph paths are
/// taken relative to `base_dir`.
pub fn run_scenario(cfg: &ExperimentConfig, base_dir: &Path) -> Result<ScenarioOutcome> {
    let resolved = cfg.resolve(base_dir)?;
    let system = OpinionSystem::new(&resolved.graph, resolved.params.clone(), resolved.mode.clone())?;
    let mut trajectory = system.simulate(&resolved.x0, resolved.u0.as_deref(), &resolved.integrator)?;
    if !matches!(cfg.initial.distribution, InitialDistribution::Values(_) | InitialDistribution::Zero) {
        trajectory = trajectory.with_seed(cfg.initial.seed);
    }
    let report = build_report(&cfg.name, &resolved, &trajectory, cfg.theta)?;
    let svg = render(cfg, &resolved, &report);
    Ok(ScenarioOutcome {
        config: cfg.clone(),
        resolved,
        trajectory,
        report,
        svg,
    })
}

/// Re-analyses a stored trajectory under the given config.
pub fn analyze_trajectory(cfg: &ExperimentConfig, base_dir: &Path, trajectory: &Trajectory) -> Result<AnalysisReport> {
    let resolved = cfg.resolve(base_dir)?;
    build_report(&cfg.name, &resolved, trajectory, cfg.theta)
}
