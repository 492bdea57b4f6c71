use serde::{Deserialize, Serialize};

use super::config::ResolvedScenario;
use crate::analysis::{
    check_bipartite_signs, check_centrality_order, classify, detect_cascade, input_projection, origin_eigenvalues,
    u_agree, u_disagree, CascadeVerdict, Classification, OrderTolerance, OriginStability, PairReport, Projection,
};
use crate::dynamics::{AttentionMode, OpinionSystem, Trajectory};
use crate::error::{Error, Result};
use crate::symmetry::{automorphisms, check_orbit_magnitudes, orbits, PatternKind, MAX_SEARCH_VERTICES};

/// Final-state residual below which the run counts as settled.
pub const SETTLED_TOL: f64 = 1e-6;

/// Magnitude tolerance for the orbit pattern check.
pub const ORBIT_TOL: f64 = 1e-3;

/// Machine-readable summary of one scenario run. Agent indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub scenario: String,
    pub n_agents: usize,
    pub directed: bool,
    pub spectrum: SpectrumFacts,
    pub thresholds: Thresholds,
    /// Constant attention in fixed mode.
    pub attention: Option<f64>,
    pub origin: Option<OriginStability>,
    pub final_time: f64,
    pub final_state: Vec<f64>,
    pub final_attention: Option<Vec<f64>>,
    pub residual: f64,
    pub settled: bool,
    pub classification: Classification,
    pub centrality_order: Option<PairCheck>,
    pub bipartite_signs: Option<bool>,
    pub orbit_pattern: Option<OrbitCheck>,
    pub input_target: Option<usize>,
    pub input_projection: Option<Projection>,
    pub cascade: Option<CascadeVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFacts {
    pub lambda_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub mult_max: Option<usize>,
    pub mult_min: Option<usize>,
    pub centrality: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub u_agree: Option<f64>,
    pub u_disagree: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub ok: bool,
    pub violations: Vec<[usize; 2]>,
}

impl From<PairReport> for PairCheck {
    fn from(r: PairReport) -> Self {
        Self {
            ok: r.ok,
            violations: r.violations.into_iter().map(|(i, k)| [i + 1, k + 1]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub kind: PatternKind,
    pub orbits: Vec<Vec<usize>>,
    pub ok: bool,
    pub violations: Vec<[usize; 2]>,
}

pub fn build_report(name: &str, scenario: &ResolvedScenario, traj: &Trajectory, theta: f64) -> Result<AnalysisReport> {
    let n = scenario.graph.n_agents();
    if traj.n_agents() != n {
        return Err(Error::invalid(format!(
            "trajectory has {} agents, graph has {n}",
            traj.n_agents()
        )));
    }
    if traj.is_coupled() != scenario.mode.is_coupled() {
        return Err(Error::invalid("trajectory and configuration disagree on the attention mode"));
    }
    let p = &scenario.params;
    let spec = scenario.spectrum.as_ref();
    let system = OpinionSystem::new(&scenario.graph, p.clone(), scenario.mode.clone())?;
    let last = traj.last();
    let residual = system.residual(last)?;
    let x = &last.x;

    let thresholds = Thresholds {
        u_agree: scenario.lambda_max.and_then(|l| u_agree(p, l).ok()),
        u_disagree: spec.and_then(|s| u_disagree(p, s.lambda_min).ok()),
    };
    let fixed_u = match scenario.mode {
        AttentionMode::Fixed { u } => Some(u),
        AttentionMode::Coupled(_) => None,
    };
    let origin = match (fixed_u, spec) {
        (Some(u), Some(s)) => Some(origin_eigenvalues(p, u, &s.eigenvalues)),
        _ => None,
    };

    // Structural pattern checks apply to unbiased fixed-attention runs on connected undirected graphs.
    let symmetric_setting = fixed_u.is_some() && p.is_unbiased() && p.gamma != 0.0;
    let connected = spec.filter(|s| s.centrality.is_some());
    let bipartition = match connected {
        Some(_) => scenario.graph.bipartition()?,
        None => None,
    };

    let centrality_order = match connected {
        Some(s) if symmetric_setting && (p.gamma > 0.0 || bipartition.is_some()) => {
            let c = s.centrality.as_ref().expect("connected");
            Some(check_centrality_order(x, c, OrderTolerance::default())?.into())
        }
        _ => None,
    };
    let bipartite_signs = match &bipartition {
        Some((left, right)) if p.gamma < 0.0 => Some(check_bipartite_signs(x, (left, right), theta)),
        _ => None,
    };
    let orbit_pattern = match connected {
        Some(s) if symmetric_setting && n <= MAX_SEARCH_VERTICES => {
            let (kind, simple) = if p.gamma > 0.0 {
                (PatternKind::Agreement, s.mult_max == 1)
            } else {
                (PatternKind::Disagreement, s.mult_min == 1)
            };
            match (simple, automorphisms(&scenario.graph)) {
                (true, Ok(group)) => {
                    let op = orbits(&group, n)?;
                    let r = check_orbit_magnitudes(x, &op, kind, ORBIT_TOL)?;
                    let r: PairCheck = r.into();
                    Some(OrbitCheck {
                        kind,
                        orbits: op.one_based(),
                        ok: r.ok,
                        violations: r.violations,
                    })
                }
                (true, Err(Error::SizeLimit { .. })) | (false, _) => None,
                (true, Err(e)) => return Err(e),
            }
        }
        _ => None,
    };

    let input_projection = match spec {
        Some(s) if !p.is_unbiased() && p.gamma != 0.0 => {
            let basis = if p.gamma > 0.0 { &s.basis_max } else { &s.basis_min };
            Some(input_projection(&p.bias, basis)?)
        }
        _ => None,
    };
    let cascade = match (&scenario.mode, &scenario.cascade) {
        (AttentionMode::Coupled(ap), Some(cc)) => Some(detect_cascade(traj, ap, p, cc)?),
        _ => None,
    };

    Ok(AnalysisReport {
        scenario: name.to_string(),
        n_agents: n,
        directed: scenario.graph.is_directed(),
        spectrum: SpectrumFacts {
            lambda_max: scenario.lambda_max,
            lambda_min: spec.map(|s| s.lambda_min),
            mult_max: spec.map(|s| s.mult_max),
            mult_min: spec.map(|s| s.mult_min),
            centrality: spec.and_then(|s| s.centrality.clone()),
        },
        thresholds,
        attention: fixed_u,
        origin,
        final_time: last.t,
        final_state: x.clone(),
        final_attention: last.u.clone(),
        residual,
        settled: residual <= SETTLED_TOL,
        classification: classify(x, theta),
        centrality_order,
        bipartite_signs,
        orbit_pattern,
        input_target: scenario.target.map(|i| i + 1),
        input_projection,
        cascade,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
