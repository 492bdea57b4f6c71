//! Scenario configs, figure reproduction and run output (trajectory CSV,
//! analysis JSON, network SVG, manifest).

pub mod config;
pub mod figure;
pub mod render;
pub mod report;
pub mod scenario;

pub use config::{
    BiasSpec, ExperimentConfig, GeneratorSpec, GraphSource, HorizonSpec, InitialDistribution, InitialSpec, ModeSpec,
    ParamsSpec, ResolvedScenario, TargetSelect,
};
pub use figure::{run_figure, FigureId, FigureOutcome, PanelSummary};
pub use report::{build_report, AnalysisReport};
pub use scenario::{analyze_trajectory, run_scenario, Overrides, RunManifest, ScenarioOutcome};
