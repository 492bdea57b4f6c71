//! Opinion and attention dynamics on a fixed interaction graph.
//!
//! Each agent evolves as
//! `ẋ_i = −d x_i + u_i tanh(α x_i + γ Σ_k ā_ik x_k) + b_i`;
//! attention is either a shared constant or follows
//! `τ_s u̇_i = −u_i + S_u(Σ_k (ā_ik x_k)²)`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{dot, AdjacencyMatrix, Graph};

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_STRIDE: f64 = 1.0;
pub const DEFAULT_T_END: f64 = 500.0;
pub const CASCADE_T_END: f64 = 300.0;
pub const DEFAULT_EQUILIBRIUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Resistance `d > 0`.
    pub d: f64,
    /// Self-weight `α > 0`.
    pub alpha: f64,
    /// Coupling `γ`: positive is cooperative, negative competitive.
    pub gamma: f64,
    pub bias: Vec<f64>,
}

impl ModelParams {
    pub fn new(d: f64, alpha: f64, gamma: f64, bias: Vec<f64>) -> Result<Self> {
        let p = Self {
            d,
            alpha,
            gamma,
            bias,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn unbiased(d: f64, alpha: f64, gamma: f64, n: usize) -> Result<Self> {
        Self::new(d, alpha, gamma, vec![0.0; n])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0) || !self.d.is_finite() {
            return Err(Error::invalid(format!("resistance d must be > 0, got {}", self.d)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(format!("self-weight alpha must be > 0, got {}", self.alpha)));
        }
        if !self.gamma.is_finite() || self.bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("gamma and bias must be finite"));
        }
        Ok(())
    }

    pub fn is_unbiased(&self) -> bool {
        self.bias.iter().all(|&b| b == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionParams {
    pub u_f: f64,
    pub g: f64,
    pub y_m: f64,
    pub tau_s: f64,
    /// Adds the agent's own squared opinion to the observed sum. Off by default;
    /// the standard law sums over neighbours only.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub observe_self: bool,
}

impl AttentionParams {
    pub fn new(u_f: f64, g: f64, y_m: f64, tau_s: f64) -> Result<Self> {
        let p = Self {
            u_f,
            g,
            y_m,
            tau_s,
            observe_self: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u_f", self.u_f),
            ("g", self.g),
            ("y_m", self.y_m),
            ("tau_s", self.tau_s),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("attention parameter {name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// `lim_{y→∞} S_u(y) = u_f (1 − F(−g y_m))`.
    pub fn u_sat(&self) -> f64 {
        self.u_f * (1.0 - logistic(-self.g * self.y_m))
    }

    fn saturate(&self, y: f64) -> f64 {
        self.u_f * (logistic(self.g * (y - self.y_m)) - logistic(-self.g * self.y_m))
    }
}

/// Odd saturating social-influence nonlinearity.
#[inline]
pub fn saturation(z: f64) -> f64 {
    z.tanh()
}

#[inline]
pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `S_u(y) = u_f (F(g (y − y_m)) − F(−g y_m))` for `y ≥ 0`.
pub fn attention_saturation(y: f64, p: &AttentionParams) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::invalid(format!("attention input must be >= 0, got {y}")));
    }
    Ok(p.saturate(y))
}

fn check_dims(n: usize, x: &[f64], u: &[f64], a: &AdjacencyMatrix) -> Result<()> {
    if x.len() != n || u.len() != n || a.dim() != n {
        return Err(Error::invalid(format!(
            "dimension mismatch: x has {}, u has {}, adjacency is {}x{}",
            x.len(),
            u.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(())
}

pub fn opinion_rhs(x: &[f64], u: &[f64], p: &ModelParams, a: &AdjacencyMatrix) -> Result<Vec<f64>> {
    check_dims(p.bias.len(), x, u, a)?;
    let mut out = vec![0.0; x.len()];
    opinion_rhs_into(x, u, p, a, &mut out);
    Ok(out)
}

fn opinion_rhs_into(x: &[f64], u: &[f64], p: &ModelParams, a: &AdjacencyMatrix, out: &mut [f64]) {
    for i in 0..x.len() {
        let social = p.alpha * x[i] + p.gamma * dot(a.row(i), x);
        out[i] = -p.d * x[i] + u[i] * saturation(social) + p.bias[i];
    }
}

pub fn attention_rhs(x: &[f64], u: &[f64], p: &AttentionParams, a: &AdjacencyMatrix) -> Result<Vec<f64>> {
    check_dims(x.len(), x, u, a)?;
    let mut out = vec![0.0; x.len()];
    attention_rhs_into(x, u, p, a, &mut out);
    Ok(out)
}

fn attention_rhs_into(x: &[f64], u: &[f64], p: &AttentionParams, a: &AdjacencyMatrix, out: &mut [f64]) {
    for i in 0..x.len() {
        let mut y: f64 = a
            .row(i)
            .iter()
            .zip(x)
            .map(|(aik, xk)| (aik * xk) * (aik * xk))
            .sum();
        if p.observe_self {
            y += x[i] * x[i];
        }
        out[i] = (-u[i] + p.saturate(y)) / p.tau_s;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttentionMode {
    /// Every agent holds the same constant attention `u ≥ 0`.
    Fixed { u: f64 },
    /// Attention follows the saturated feedback law.
    Coupled(AttentionParams),
}

impl AttentionMode {
    pub fn is_coupled(&self) -> bool {
        matches!(self, AttentionMode::Coupled(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Output sampling interval in time units; must be a multiple of `dt`.
    pub stride: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            t_end: DEFAULT_T_END,
            dt: DEFAULT_DT,
            stride: DEFAULT_STRIDE,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_end(t_end: f64) -> Self {
        Self {
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.steps().map(|_| ())
    }

    /// `(total steps, steps per output sample)`.
    fn steps(&self) -> Result<(usize, usize)> {
        if !(self.dt > 0.0) || !(self.t_end > 0.0) || !(self.stride > 0.0) {
            return Err(Error::invalid("dt, t_end and stride must all be positive"));
        }
        let total = (self.t_end / self.dt).round();
        let per = (self.stride / self.dt).round();
        if per < 1.0 || (per * self.dt - self.stride).abs() > 1e-9 * self.stride.max(1.0) {
            return Err(Error::invalid(format!(
                "output stride {} is not a multiple of dt {}",
                self.stride, self.dt
            )));
        }
        if (total * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) || total % per != 0.0 {
            return Err(Error::invalid(format!(
                "t_end {} is not a multiple of the output stride {}",
                self.t_end, self.stride
            )));
        }
        Ok((total as usize, per as usize))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    pub x: Vec<f64>,
    /// Attention, recorded in coupled mode only.
    pub u: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub dt: Option<f64>,
    pub stride: f64,
    pub seed: Option<u64>,
    pub params: Option<ModelParams>,
    pub mode: Option<AttentionMode>,
}

/// States sampled at a uniform stride.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<SimState>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn initial(&self) -> &SimState {
        &self.samples[0]
    }

    pub fn last(&self) -> &SimState {
        self.samples.last().expect("trajectories are never empty")
    }

    pub fn n_agents(&self) -> usize {
        self.samples[0].x.len()
    }

    pub fn is_coupled(&self) -> bool {
        self.samples[0].u.is_some()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    /// CSV with header `t,x_1,…,x_N[,u_1,…,u_N]` and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let n = self.n_agents();
        let mut out = String::from("t");
        for i in 1..=n {
            let _ = write!(out, ",x_{i}");
        }
        if self.is_coupled() {
            for i in 1..=n {
                let _ = write!(out, ",u_{i}");
            }
        }
        out.push('\n');
        for s in &self.samples {
            let _ = write!(out, "{:.16e}", s.t);
            for v in s.x.iter().chain(s.u.iter().flatten()) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Csv {
            line: 1,
            message: "empty file".into(),
        })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t") {
            return Err(Error::Csv {
                line: 1,
                message: "first column must be `t`".into(),
            });
        }
        let n_x = cols.iter().filter(|c| c.starts_with("x_")).count();
        let n_u = cols.iter().filter(|c| c.starts_with("u_")).count();
        let expected: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=n_x).map(|i| format!("x_{i}")))
            .chain((1..=n_u).map(|i| format!("u_{i}")))
            .collect();
        if n_x == 0 || (n_u != 0 && n_u != n_x) || cols != expected {
            return Err(Error::Csv {
                line: 1,
                message: format!("unexpected header `{header}`"),
            });
        }
        let mut samples = Vec::new();
        for (idx, line) in lines {
            let values = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Csv {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            if values.len() != cols.len() {
                return Err(Error::Csv {
                    line: idx + 1,
                    message: format!("expected {} fields, found {}", cols.len(), values.len()),
                });
            }
            samples.push(SimState {
                t: values[0],
                x: values[1..=n_x].to_vec(),
                u: (n_u > 0).then(|| values[n_x + 1..].to_vec()),
            });
        }
        if samples.is_empty() {
            return Err(Error::Csv {
                line: 2,
                message: "no samples".into(),
            });
        }
        let stride = if samples.len() > 1 {
            samples[1].t - samples[0].t
        } else {
            0.0
        };
        for (j, w) in samples.windows(2).enumerate() {
            let step = w[1].t - w[0].t;
            if !(step > 0.0) || (step - stride).abs() > 1e-9 * stride.max(1.0) {
                return Err(Error::Csv {
                    line: j + 3,
                    message: "time column must increase with a constant stride".into(),
                });
            }
        }
        Ok(Self {
            samples,
            meta: TrajectoryMeta {
                stride,
                ..TrajectoryMeta::default()
            },
        })
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// A graph, homogeneous parameters and an attention law: everything needed to integrate.
#[derive(Debug, Clone)]
pub struct OpinionSystem {
    adjacency: AdjacencyMatrix,
    params: ModelParams,
    mode: AttentionMode,
}

impl OpinionSystem {
    pub fn new(graph: &Graph, params: ModelParams, mode: AttentionMode) -> Result<Self> {
        Self::from_adjacency(graph.adjacency(), params, mode)
    }

    pub fn from_adjacency(adjacency: AdjacencyMatrix, params: ModelParams, mode: AttentionMode) -> Result<Self> {
        params.validate()?;
        if params.bias.len() != adjacency.dim() {
            return Err(Error::invalid(format!(
                "bias has {} entries for {} agents",
                params.bias.len(),
                adjacency.dim()
            )));
        }
        match &mode {
            AttentionMode::Fixed { u } if !(*u >= 0.0) || !u.is_finite() => {
                return Err(Error::invalid(format!("fixed attention must be >= 0, got {u}")));
            }
            AttentionMode::Coupled(ap) => ap.validate()?,
            _ => {}
        }
        Ok(Self {
            adjacency,
            params,
            mode,
        })
    }

    pub fn adjacency(&self) -> &AdjacencyMatrix {
        &self.adjacency
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn mode(&self) -> &AttentionMode {
        &self.mode
    }

    pub fn n_agents(&self) -> usize {
        self.adjacency.dim()
    }

    /// Opinion and (coupled mode) attention derivatives at a state.
    pub fn rhs(&self, x: &[f64], u: Option<&[f64]>) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
        let n = self.n_agents();
        match &self.mode {
            AttentionMode::Fixed { u: u_fixed } => {
                let uv = vec![*u_fixed; n];
                Ok((opinion_rhs(x, &uv, &self.params, &self.adjacency)?, None))
            }
            AttentionMode::Coupled(ap) => {
                let u = u.ok_or_else(|| Error::invalid("coupled mode needs an attention vector"))?;
                let dx = opinion_rhs(x, u, &self.params, &self.adjacency)?;
                let du = attention_rhs(x, u, ap, &self.adjacency)?;
                Ok((dx, Some(du)))
            }
        }
    }

    /// Max-norm of the full right-hand side at `state`.
    pub fn residual(&self, state: &SimState) -> Result<f64> {
        let (dx, du) = self.rhs(&state.x, state.u.as_deref())?;
        Ok(dx
            .iter()
            .chain(du.iter().flatten())
            .fold(0.0f64, |m, v| m.max(v.abs())))
    }

    /// Flat right-hand side over `[x; u]` (or `x` alone in fixed mode).
    fn flat_rhs(&self, state: &[f64], out: &mut [f64], ubuf: &mut [f64]) {
        let n = self.n_agents();
        match &self.mode {
            AttentionMode::Fixed { u } => {
                ubuf.iter_mut().for_each(|v| *v = *u);
                opinion_rhs_into(state, ubuf, &self.params, &self.adjacency, out);
            }
            AttentionMode::Coupled(ap) => {
                let (x, u) = state.split_at(n);
                let (dx, du) = out.split_at_mut(n);
                opinion_rhs_into(x, u, &self.params, &self.adjacency, dx);
                attention_rhs_into(x, u, ap, &self.adjacency, du);
            }
        }
    }

    /// Fixed-step classical Runge–Kutta integration from `(x0, u0)`.
    ///
    /// `u0` is ignored in fixed mode and defaults to zeros in coupled mode.
    pub fn simulate(&self, x0: &[f64], u0: Option<&[f64]>, cfg: &IntegratorConfig) -> Result<Trajectory> {
        self.simulate_from(0.0, x0, u0, cfg)
    }

    fn simulate_from(&self, t0: f64, x0: &[f64], u0: Option<&[f64]>, cfg: &IntegratorConfig) -> Result<Trajectory> {
        let n = self.n_agents();
        let (total, per) = cfg.steps()?;
        if x0.len() != n {
            return Err(Error::invalid(format!("x0 has {} entries for {n} agents", x0.len())));
        }
        let coupled = self.mode.is_coupled();
        let mut state = x0.to_vec();
        if coupled {
            match u0 {
                Some(u) if u.len() != n => {
                    return Err(Error::invalid(format!("u0 has {} entries for {n} agents", u.len())))
                }
                Some(u) => state.extend_from_slice(u),
                None => state.extend(std::iter::repeat_n(0.0, n)),
            }
        }
        if state.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationDiverged { t: t0 });
        }
        let u_nonneg = coupled && state[n..].iter().all(|&v| v >= 0.0);

        let dim = state.len();
        let dt = cfg.dt;
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        let mut ubuf = vec![0.0; n];
        let mut samples = Vec::with_capacity(total / per + 1);
        let record = |state: &[f64], t: f64| SimState {
            t,
            x: state[..n].to_vec(),
            u: coupled.then(|| state[n..].to_vec()),
        };
        samples.push(record(&state, t0));

        for step in 1..=total {
            self.flat_rhs(&state, &mut k1, &mut ubuf);
            for j in 0..dim {
                tmp[j] = state[j] + 0.5 * dt * k1[j];
            }
            self.flat_rhs(&tmp, &mut k2, &mut ubuf);
            for j in 0..dim {
                tmp[j] = state[j] + 0.5 * dt * k2[j];
            }
            self.flat_rhs(&tmp, &mut k3, &mut ubuf);
            for j in 0..dim {
                tmp[j] = state[j] + dt * k3[j];
            }
            self.flat_rhs(&tmp, &mut k4, &mut ubuf);
            for j in 0..dim {
                state[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            let t = t0 + step as f64 * dt;
            if state.iter().any(|v| !v.is_finite()) {
                return Err(Error::IntegrationDiverged { t });
            }
            debug_assert!(
                !u_nonneg || state[n..].iter().all(|&v| v >= -1e-12),
                "attention left its invariant range"
            );
            if step % per == 0 {
                samples.push(record(&state, t));
            }
        }
        Ok(Trajectory {
            samples,
            meta: TrajectoryMeta {
                dt: Some(dt),
                stride: cfg.stride,
                seed: None,
                params: Some(self.params.clone()),
                mode: Some(self.mode.clone()),
            },
        })
    }

    /// Final state of `traj` if the right-hand side there is below `tol` in max-norm.
    pub fn find_equilibrium(&self, traj: &Trajectory, tol: f64) -> Option<SimState> {
        let last = traj.last();
        match self.residual(last) {
            Ok(r) if r < tol => Some(last.clone()),
            _ => None,
        }
    }

    /// Integrates in blocks of `cfg.t_end` until the final state is an equilibrium
    /// within `tol` or `max_t` is reached. The returned trajectory covers the whole run.
    pub fn simulate_to_equilibrium(
        &self,
        x0: &[f64],
        u0: Option<&[f64]>,
        cfg: &IntegratorConfig,
        tol: f64,
        max_t: f64,
    ) -> Result<Trajectory> {
        let mut traj = self.simulate(x0, u0, cfg)?;
        while self.find_equilibrium(&traj, tol).is_none() && traj.last().t + cfg.t_end <= max_t + 1e-9 {
            let last = traj.last().clone();
            let more = self.simulate_from(last.t, &last.x, last.u.as_deref(), cfg)?;
            traj.samples.extend(more.samples.into_iter().skip(1));
        }
        Ok(traj)
    }
}
