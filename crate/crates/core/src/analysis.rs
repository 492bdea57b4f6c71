//! Bifurcation thresholds, stability of the neutral state, group-state
//! classification, pattern checks and cascade detection.

use serde::{Deserialize, Serialize};

use crate::dynamics::{AttentionParams, ModelParams, Trajectory};
use crate::error::{Error, Result};
use crate::graph::dot;

/// Default opinion threshold ϑ.
pub const DEFAULT_THETA: f64 = 0.1;

/// Attention at which cooperative agents leave the neutral state: `d / (α + γ λ_max)`.
pub fn u_agree(p: &ModelParams, lambda_max: f64) -> Result<f64> {
    if !(p.gamma > 0.0) {
        return Err(Error::invalid("u_agree needs gamma > 0"));
    }
    let denom = p.alpha + p.gamma * lambda_max;
    if !(denom > 0.0) {
        return Err(Error::invalid("u_agree needs alpha + gamma * lambda_max > 0"));
    }
    Ok(p.d / denom)
}

/// Attention at which competitive agents leave the neutral state: `d / (α + γ λ_min)`.
pub fn u_disagree(p: &ModelParams, lambda_min: f64) -> Result<f64> {
    if !(p.gamma < 0.0) {
        return Err(Error::invalid("u_disagree needs gamma < 0"));
    }
    let denom = p.alpha + p.gamma * lambda_min;
    if !(denom > 0.0) {
        return Err(Error::invalid("u_disagree needs alpha + gamma * lambda_min > 0"));
    }
    Ok(p.d / denom)
}

/// The threshold relevant for the sign of γ.
pub fn u_critical(p: &ModelParams, lambda_max: f64, lambda_min: f64) -> Result<f64> {
    if p.gamma > 0.0 {
        u_agree(p, lambda_max)
    } else {
        u_disagree(p, lambda_min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginStability {
    /// `μ_i = u (α + γ λ_i) − d`, one per adjacency eigenvalue.
    pub eigenvalues: Vec<f64>,
    pub stable: bool,
}

/// Linearisation of the unbiased fixed-attention dynamics at `x = 0`.
pub fn origin_eigenvalues(p: &ModelParams, u: f64, spectrum: &[f64]) -> OriginStability {
    let eigenvalues: Vec<f64> = spectrum
        .iter()
        .map(|l| u * (p.alpha + p.gamma * l) - p.d)
        .collect();
    let stable = eigenvalues.iter().all(|&m| m < 0.0);
    OriginStability {
        eigenvalues,
        stable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupState {
    /// `x = 0`.
    Neutral,
    /// No agent is opinionated.
    Unopinionated,
    /// Every agent opinionated, all with the same sign.
    Agreement,
    /// At least one opinionated pair with opposite signs.
    Disagreement,
    /// Some but not all agents opinionated, all on the same side.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: GroupState,
    pub consensus: bool,
    pub dissensus: bool,
    pub opinionated: Vec<bool>,
}

pub fn classify(x: &[f64], theta: f64) -> Classification {
    let opinionated: Vec<bool> = x.iter().map(|v| v.abs() > theta).collect();
    let positive = x.iter().zip(&opinionated).any(|(v, &o)| o && *v > 0.0);
    let negative = x.iter().zip(&opinionated).any(|(v, &o)| o && *v < 0.0);
    let label = if x.iter().all(|v| v.abs() <= 1e-12) {
        GroupState::Neutral
    } else if !opinionated.iter().any(|&o| o) {
        GroupState::Unopinionated
    } else if positive && negative {
        GroupState::Disagreement
    } else if opinionated.iter().all(|&o| o) {
        GroupState::Agreement
    } else {
        GroupState::Partial
    };
    let consensus = label == GroupState::Agreement && max_spread(x) < theta;
    let dissensus = label == GroupState::Disagreement && x.iter().sum::<f64>().abs() < theta * x.len() as f64;
    Classification {
        label,
        consensus,
        dissensus,
        opinionated,
    }
}

fn max_spread(x: &[f64]) -> f64 {
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Tolerances for comparing centralities and opinion magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderTolerance {
    pub centrality: f64,
    pub magnitude: f64,
}

impl Default for OrderTolerance {
    fn default() -> Self {
        Self {
            centrality: 1e-6,
            magnitude: 1e-3,
        }
    }
}

impl OrderTolerance {
    pub fn uniform(tol: f64) -> Self {
        Self {
            centrality: tol,
            magnitude: tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub ok: bool,
    /// Offending 0-based agent pairs.
    pub violations: Vec<(usize, usize)>,
}

/// Checks that opinion magnitudes follow centrality: strictly more central agents
/// are not weaker, and equally central agents are equally strong.
pub fn check_centrality_order(x: &[f64], centrality: &[f64], tol: OrderTolerance) -> Result<PairReport> {
    if x.len() != centrality.len() {
        return Err(Error::invalid("opinion and centrality vectors differ in length"));
    }
    let mut violations = Vec::new();
    for i in 0..x.len() {
        for k in 0..x.len() {
            if i == k {
                continue;
            }
            let (vi, vk) = (centrality[i], centrality[k]);
            let (xi, xk) = (x[i].abs(), x[k].abs());
            let bad = if vi < vk - tol.centrality {
                !(xi < xk + tol.magnitude)
            } else if (vi - vk).abs() <= tol.centrality {
                i < k && (xi - xk).abs() > tol.magnitude
            } else {
                false
            };
            if bad {
                violations.push((i, k));
            }
        }
    }
    Ok(PairReport {
        ok: violations.is_empty(),
        violations,
    })
}

/// Opinionated agents on one side of the bipartition share a sign, opposite to the other side.
pub fn check_bipartite_signs(x: &[f64], partition: (&[usize], &[usize]), theta: f64) -> bool {
    let side_sign = |side: &[usize]| -> Option<Option<f64>> {
        let mut sign = None;
        for &i in side {
            if x[i].abs() > theta {
                let s = x[i].signum();
                match sign {
                    None => sign = Some(s),
                    Some(prev) if prev != s => return None,
                    _ => {}
                }
            }
        }
        Some(sign)
    };
    match (side_sign(partition.0), side_sign(partition.1)) {
        (Some(Some(a)), Some(Some(b))) => a != b,
        (Some(_), Some(_)) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub norm_in: f64,
    pub norm_out: f64,
}

/// Splits `b` into its component inside `span(basis)` and the residual; `basis` must be orthonormal.
pub fn input_projection(b: &[f64], basis: &[Vec<f64>]) -> Result<Projection> {
    if basis.iter().any(|v| v.len() != b.len()) {
        return Err(Error::invalid("basis vectors must match the input dimension"));
    }
    let mut inside = vec![0.0; b.len()];
    for v in basis {
        let c = dot(b, v);
        for (s, vi) in inside.iter_mut().zip(v) {
            *s += c * vi;
        }
    }
    let norm_in = dot(&inside, &inside).sqrt();
    let norm_out = b
        .iter()
        .zip(&inside)
        .map(|(bi, si)| (bi - si) * (bi - si))
        .sum::<f64>()
        .sqrt();
    Ok(Projection { norm_in, norm_out })
}

/// Thresholds for declaring an opinion cascade, on RMS-per-agent norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeCriteria {
    pub delta1: f64,
    pub delta2: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// When set, the cascade must be established no later than this time.
    #[serde(default)]
    pub deadline: Option<f64>,
}

impl CascadeCriteria {
    /// `δ₁ = δ₂ = 0.5`, `ε₁ = ε₂ = 0.3 u_sat`.
    pub fn defaults_for(ap: &AttentionParams) -> Self {
        let eps = 0.3 * ap.u_sat();
        Self {
            delta1: 0.5,
            delta2: 0.5,
            eps1: eps,
            eps2: eps,
            deadline: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.delta1, self.delta2, self.eps1, self.eps2]
            .iter()
            .any(|v| !(*v > 0.0))
        {
            return Err(Error::invalid("cascade deltas and epsilons must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeVerdict {
    pub cascade: bool,
    pub onset: Option<f64>,
}

/// Root-mean-square per agent.
pub fn rms(v: &[f64]) -> f64 {
    (dot(v, v) / v.len() as f64).sqrt()
}

/// Looks for a transition from a small `(x, u)` to `‖x‖ > u_sat/d − ε₁`, `‖u‖ > u_sat − ε₂`
/// holding on every sample from the onset to the end of the trajectory.
pub fn detect_cascade(
    traj: &Trajectory,
    ap: &AttentionParams,
    p: &ModelParams,
    cc: &CascadeCriteria,
) -> Result<CascadeVerdict> {
    if !traj.is_coupled() {
        return Err(Error::invalid("cascade detection needs a coupled-attention trajectory"));
    }
    cc.validate()?;
    let none = CascadeVerdict {
        cascade: false,
        onset: None,
    };
    let first = traj.initial();
    let u_of = |s: &crate::dynamics::SimState| rms(s.u.as_deref().expect("coupled samples carry u"));
    if !(rms(&first.x) < cc.delta1 && u_of(first) < cc.delta2) {
        return Ok(none);
    }
    let u_sat = ap.u_sat();
    let x_bar = u_sat / p.d - cc.eps1;
    let u_bar = u_sat - cc.eps2;
    let mut onset = None;
    for s in traj.samples.iter().rev() {
        if rms(&s.x) > x_bar && u_of(s) > u_bar {
            onset = Some(s.t);
        } else {
            break;
        }
    }
    let onset = match (onset, cc.deadline) {
        (Some(t), Some(limit)) if t > limit => None,
        (o, _) => o,
    };
    Ok(CascadeVerdict {
        cascade: onset.is_some(),
        onset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{SimState, TrajectoryMeta};

    fn params(d: f64, alpha: f64, gamma: f64) -> ModelParams {
        ModelParams::unbiased(d, alpha, gamma, 1).unwrap()
    }

    #[test]
    fn thresholds() {
        assert!((u_agree(&params(1.0, 1.0, 1.0), 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let fig1 = u_agree(&params(1.0, 1.2, 1.3), 2.0).unwrap();
        assert!((fig1 - 1.0 / 3.8).abs() < 1e-15);
        assert!((fig1 - 0.2632).abs() < 1e-4 && fig1 < 0.31);
        assert!((u_agree(&params(1.0, 2.0, 1e-12), 3.0).unwrap() - 0.5).abs() < 1e-10);

        assert!((u_disagree(&params(1.0, 0.5, -0.5), -2.0).unwrap() - 1.0 / 1.5).abs() < 1e-15);
        assert!((u_disagree(&params(1.0, 1.0, -1.0), -1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((u_disagree(&params(1.0, 2.0, -1e-12), -3.0).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn threshold_preconditions() {
        assert!(u_agree(&params(1.0, 1.0, -1.0), 2.0).is_err());
        assert!(u_agree(&params(1.0, 1.0, 0.0), 2.0).is_err());
        assert!(u_disagree(&params(1.0, 1.0, 1.0), -2.0).is_err());
        assert!(u_disagree(&params(1.0, 1.0, -1.0), 2.0).is_err());
    }

    #[test]
    fn origin_examples() {
        let p = params(1.0, 1.0, 1.0);
        let spec = [-2.0, 0.0, 0.0, 2.0];
        let zero = origin_eigenvalues(&p, 0.0, &spec);
        assert!(zero.eigenvalues.iter().all(|&m| m == -1.0) && zero.stable);

        let ua = u_agree(&p, 2.0).unwrap();
        let at = origin_eigenvalues(&p, ua, &spec);
        let max = at.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
        assert!(max.abs() < 1e-15);

        let o = origin_eigenvalues(&p, 0.4, &spec);
        assert!((o.eigenvalues[3] - 0.2).abs() < 1e-15);
        assert!(!o.stable);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&[0.5, 0.5, 0.5], 0.1);
        assert_eq!(c.label, GroupState::Agreement);
        assert!(c.consensus && !c.dissensus);

        let c = classify(&[0.5, -0.5], 0.1);
        assert_eq!(c.label, GroupState::Disagreement);
        assert!(c.dissensus && !c.consensus);

        assert_eq!(classify(&[0.01, -0.02], 0.1).label, GroupState::Unopinionated);
        assert_eq!(classify(&[0.0, 0.0], 0.1).label, GroupState::Neutral);
        assert_eq!(classify(&[0.5, 0.05], 0.1).label, GroupState::Partial);

        let spread = classify(&[0.2, 0.9], 0.1);
        assert_eq!(spread.label, GroupState::Agreement);
        assert!(!spread.consensus);
        let lopsided = classify(&[0.9, 0.8, -0.2], 0.1);
        assert!(lopsided.label == GroupState::Disagreement && !lopsided.dissensus);
    }

    #[test]
    fn centrality_order_examples() {
        let vc = [0.5; 4];
        assert!(check_centrality_order(&[0.3, -0.3, 0.3, -0.3], &vc, OrderTolerance::default())
            .unwrap()
            .ok);
        let vc = [0.2, 0.8];
        let r = check_centrality_order(&[0.9, 0.1], &vc, OrderTolerance::default()).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violations, vec![(0, 1)]);
        let r = check_centrality_order(&[0.5, 0.4], &[0.5, 0.5], OrderTolerance::uniform(1e-3)).unwrap();
        assert_eq!(r.violations, vec![(0, 1)]);
        assert!(check_centrality_order(&[0.1], &[0.1, 0.2], OrderTolerance::default()).is_err());
    }

    #[test]
    fn bipartite_sign_examples() {
        let part: (&[usize], &[usize]) = (&[0], &[1, 2, 3]);
        assert!(check_bipartite_signs(&[0.8, -0.3, -0.3, -0.3], part, 0.1));
        assert!(!check_bipartite_signs(&[0.5, 0.5, 0.5, 0.5], part, 0.1));
        assert!(check_bipartite_signs(&[0.0; 4], part, 0.1));
        assert!(!check_bipartite_signs(&[0.8, -0.3, 0.3, -0.3], part, 0.1));
    }

    #[test]
    fn projection_examples() {
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let p = input_projection(&[0.3, -0.4, 0.0], &basis).unwrap();
        assert!((p.norm_in - 0.5).abs() < 1e-15 && p.norm_out == 0.0);
        let p = input_projection(&[0.0, 0.0, 2.0], &basis).unwrap();
        assert!(p.norm_in == 0.0 && (p.norm_out - 2.0).abs() < 1e-15);
        assert!(input_projection(&[1.0], &basis).is_err());
    }

    fn coupled_traj(points: &[(f64, f64)]) -> Trajectory {
        Trajectory {
            samples: points
                .iter()
                .enumerate()
                .map(|(j, &(x, u))| SimState {
                    t: j as f64,
                    x: vec![x, -x],
                    u: Some(vec![u, u]),
                })
                .collect(),
            meta: TrajectoryMeta {
                stride: 1.0,
                ..TrajectoryMeta::default()
            },
        }
    }

    #[test]
    fn cascade_detection() {
        let ap = AttentionParams::new(1.0, 10.0, 0.4, 10.0).unwrap();
        let p = ModelParams::unbiased(1.0, 1.0, -1.0, 2).unwrap();
        let cc = CascadeCriteria::defaults_for(&ap);

        let zero = coupled_traj(&[(0.0, 0.0); 5]);
        assert!(!detect_cascade(&zero, &ap, &p, &cc).unwrap().cascade);

        let up = coupled_traj(&[(0.05, 0.0), (0.2, 0.1), (0.9, 0.9), (1.0, 0.97), (1.0, 0.98)]);
        let v = detect_cascade(&up, &ap, &p, &cc).unwrap();
        assert_eq!(v, CascadeVerdict { cascade: true, onset: Some(2.0) });

        let late = CascadeCriteria {
            deadline: Some(1.5),
            ..cc
        };
        assert!(!detect_cascade(&up, &ap, &p, &late).unwrap().cascade);

        let relapse = coupled_traj(&[(0.05, 0.0), (1.0, 0.98), (0.1, 0.1)]);
        assert!(!detect_cascade(&relapse, &ap, &p, &cc).unwrap().cascade);

        let hot_start = coupled_traj(&[(1.0, 0.98), (1.0, 0.98)]);
        assert!(!detect_cascade(&hot_start, &ap, &p, &cc).unwrap().cascade);

        let mut fixed = zero.clone();
        fixed.samples.iter_mut().for_each(|s| s.u = None);
        assert!(detect_cascade(&fixed, &ap, &p, &cc).is_err());
    }
}
