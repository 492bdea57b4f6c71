use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::scenario::{run_scenario, Overrides, ScenarioOutcome};
use crate::analysis::{CascadeVerdict, GroupState};
use crate::error::{Error, Result};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Agreement and disagreement on cycle, path, star and wheel graphs.
    Fig1,
    /// Disagreement just past threshold on an odd cycle, a 3-regular graph and a random graph.
    Fig2,
    /// Input on a central versus a peripheral agent of a binary tree, with attention feedback.
    Fig3,
    /// Input on the most versus least sensitive agent of a random graph, with attention feedback.
    Fig4,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4];

    fn source(self) -> &'static str {
        match self {
            FigureId::Fig1 => include_str!("../../figures/fig1.json"),
            FigureId::Fig2 => include_str!("../../figures/fig2.json"),
            FigureId::Fig3 => include_str!("../../figures/fig3.json"),
            FigureId::Fig4 => include_str!("../../figures/fig4.json"),
        }
    }

    /// The scenario configs that make up this figure.
    pub fn configs(self) -> Result<Vec<ExperimentConfig>> {
        let cfgs: Vec<ExperimentConfig> = serde_json::from_str(self.source())?;
        for c in &cfgs {
            c.validate()?;
        }
        Ok(cfgs)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            FigureId::Fig1 => 1,
            FigureId::Fig2 => 2,
            FigureId::Fig3 => 3,
            FigureId::Fig4 => 4,
        };
        write!(f, "fig{n}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().trim_start_matches("fig") {
            "1" => Ok(FigureId::Fig1),
            "2" => Ok(FigureId::Fig2),
            "3" => Ok(FigureId::Fig3),
            "4" => Ok(FigureId::Fig4),
            _ => Err(Error::invalid(format!("unknown figure '{s}', expected fig1..fig4"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSummary {
    pub scenario: String,
    pub label: GroupState,
    pub consensus: bool,
    pub dissensus: bool,
    pub cascade: Option<CascadeVerdict>,
}

#[derive(Debug, Clone)]
pub struct FigureOutcome {
    pub id: FigureId,
    pub panels: Vec<ScenarioOutcome>,
}

impl FigureOutcome {
    pub fn panel(&self, name: &str) -> Option<&ScenarioOutcome> {
        self.panels.iter().find(|p| p.config.name == name)
    }

    pub fn summary(&self) -> Vec<PanelSummary> {
        self.panels
            .iter()
            .map(|p| PanelSummary {
                scenario: p.config.name.clone(),
                label: p.report.classification.label,
                consensus: p.report.classification.consensus,
                dissensus: p.report.classification.dissensus,
                cascade: p.report.cascade,
            })
            .collect()
    }

    /// Writes one directory per panel under `out/<figN>/` plus a summary.
    pub fn write(&self, out: impl AsRef<Path>) -> Result<()> {
        let root = out.as_ref().join(self.id.to_string());
        for p in &self.panels {
            p.write(root.join(&p.config.name))?;
        }
        std::fs::write(root.join(SUMMARY_FILE), serde_json::to_string_pretty(&self.summary())?)?;
        Ok(())
    }
}

/// Runs every panel of a figure in parallel; panel order follows the figure's config file.
pub fn run_figure(id: FigureId, overrides: &Overrides) -> Result<FigureOutcome> {
    let mut cfgs = id.configs()?;
    for c in &mut cfgs {
        overrides.apply(c);
    }
    let panels = cfgs
        .par_iter()
        .map(|c| run_scenario(c, Path::new(".")))
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureOutcome { id, panels })
}
