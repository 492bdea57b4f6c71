use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::analysis::{u_critical, CascadeCriteria, DEFAULT_THETA};
use crate::dynamics::{AttentionMode, AttentionParams, IntegratorConfig, ModelParams};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::spectral::{perron, SpectralSummary};

/// One scenario: graph, parameters, attention law, input, initial condition and horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub graph: GraphSource,
    pub params: ParamsSpec,
    pub mode: ModeSpec,
    #[serde(default)]
    pub bias: BiasSpec,
    pub initial: InitialSpec,
    #[serde(default)]
    pub horizon: HorizonSpec,
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Overrides for the cascade thresholds; defaults derive from the attention parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<CascadeCriteria>,
}

fn default_theta() -> f64 {
    DEFAULT_THETA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    Generator(GeneratorSpec),
    /// Graph JSON file, relative paths resolved against the config's directory.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Cycle { n: usize },
    Path { n: usize },
    Star { n: usize },
    Wheel { n: usize },
    Complete { n: usize },
    BalancedTree { branching: usize, depth: usize },
    Hypercube { dim: usize },
    MobiusLadder { n: usize },
    Random { n: usize, p: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            GeneratorSpec::Cycle { n } => graph::make_cycle(n),
            GeneratorSpec::Path { n } => graph::make_path(n),
            GeneratorSpec::Star { n } => graph::make_star(n),
            GeneratorSpec::Wheel { n } => graph::make_wheel(n),
            GeneratorSpec::Complete { n } => graph::make_complete(n),
            GeneratorSpec::BalancedTree { branching, depth } => graph::make_balanced_tree(branching, depth),
            GeneratorSpec::Hypercube { dim } => graph::make_hypercube(dim),
            GeneratorSpec::MobiusLadder { n } => graph::make_mobius_ladder(n),
            GeneratorSpec::Random { n, p, seed } => graph::make_random_connected(n, p, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub d: f64,
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeSpec {
    Fixed { u: f64 },
    /// Fixed attention at `u_a + offset` (γ > 0) or `u_d + offset` (γ < 0).
    AboveThreshold { offset: f64 },
    Coupled(AttentionParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BiasSpec {
    Uniform(f64),
    PerAgent(Vec<f64>),
    Target { agent: TargetSelect, value: f64 },
}

impl Default for BiasSpec {
    fn default() -> Self {
        BiasSpec::Uniform(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSelect {
    /// 1-based agent index.
    Index(usize),
    MostCentral,
    LeastCentral,
    /// Largest-magnitude entry of the λ_min-eigenvector.
    MaxLambdaMinEntry,
    /// Smallest-magnitude entry of the λ_min-eigenvector.
    MinLambdaMinEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub distribution: InitialDistribution,
    pub seed: u64,
    /// Initial attention of every agent in coupled mode.
    #[serde(default)]
    pub u0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialDistribution {
    Zero,
    Uniform { low: f64, high: f64 },
    Normal { mean: f64, std: f64 },
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HorizonSpec {
    pub t_end: f64,
    pub dt: f64,
    pub stride: f64,
}

impl Default for HorizonSpec {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            t_end: d.t_end,
            dt: d.dt,
            stride: d.stride,
        }
    }
}

impl From<HorizonSpec> for IntegratorConfig {
    fn from(h: HorizonSpec) -> Self {
        IntegratorConfig {
            t_end: h.t_end,
            dt: h.dt,
            stride: h.stride,
        }
    }
}

/// Everything a scenario run needs, derived from an [`ExperimentConfig`].
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub graph: Graph,
    /// Undirected graphs only.
    pub spectrum: Option<SpectralSummary>,
    pub lambda_max: Option<f64>,
    pub params: ModelParams,
    pub mode: AttentionMode,
    pub x0: Vec<f64>,
    pub u0: Option<Vec<f64>>,
    /// 0-based agent receiving the input, for targeted bias specs.
    pub target: Option<usize>,
    pub integrator: IntegratorConfig,
    pub cascade: Option<CascadeCriteria>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Field-level checks that do not need the graph.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        if self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must not contain path separators"));
        }
        let p = &self.params;
        if !(p.d > 0.0) {
            return Err(Error::config("params.d", "resistance must be > 0"));
        }
        if !(p.alpha > 0.0) {
            return Err(Error::config("params.alpha", "self-weight must be > 0"));
        }
        if !p.gamma.is_finite() {
            return Err(Error::config("params.gamma", "must be finite"));
        }
        match &self.mode {
            ModeSpec::Fixed { u } if !(*u >= 0.0) => {
                return Err(Error::config("mode.fixed.u", "attention must be >= 0"));
            }
            ModeSpec::AboveThreshold { .. } if p.gamma == 0.0 => {
                return Err(Error::config("mode.above_threshold", "needs a nonzero gamma"));
            }
            ModeSpec::Coupled(ap) => ap
                .validate()
                .map_err(|e| Error::config("mode.coupled", e.to_string()))?,
            _ => {}
        }
        if !(self.theta > 0.0) {
            return Err(Error::config("theta", "must be > 0"));
        }
        if let Some(cc) = &self.cascade {
            cc.validate().map_err(|e| Error::config("cascade", e.to_string()))?;
        }
        match &self.initial.distribution {
            InitialDistribution::Uniform { low, high } if !(low < high) => {
                return Err(Error::config("initial.distribution.uniform", "needs low < high"));
            }
            InitialDistribution::Normal { std, .. } if !(*std > 0.0) => {
                return Err(Error::config("initial.distribution.normal.std", "must be > 0"));
            }
            _ => {}
        }
        if !(self.initial.u0 >= 0.0) {
            return Err(Error::config("initial.u0", "attention must be >= 0"));
        }
        IntegratorConfig::from(self.horizon)
            .validate()
            .map_err(|e| Error::config("horizon", e.to_string()))?;
        Ok(())
    }

    pub fn load_graph(&self, base_dir: &Path) -> Result<Graph> {
        match &self.graph {
            GraphSource::Generator(spec) => spec.build().map_err(|e| Error::config("graph.generator", e.to_string())),
            GraphSource::File(path) => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                Graph::load(&full).map_err(|e| Error::config("graph.file", format!("{}: {e}", full.display())))
            }
        }
    }

    /// Builds the graph and derives the attention, bias and initial state.
    pub fn resolve(&self, base_dir: &Path) -> Result<ResolvedScenario> {
        self.validate()?;
        let graph = self.load_graph(base_dir)?;
        let n = graph.n_agents();
        let a = graph.adjacency();
        let spectrum = if graph.is_directed() {
            None
        } else {
            Some(SpectralSummary::compute(&a)?)
        };
        let lambda_max = match &spectrum {
            Some(s) => Some(s.lambda_max),
            None if a.is_strongly_connected() => Some(perron(&a)?.lambda_max),
            None => None,
        };

        let (bias, target) = self.resolve_bias(n, spectrum.as_ref())?;
        let params = ModelParams::new(self.params.d, self.params.alpha, self.params.gamma, bias)
            .map_err(|e| Error::config("params", e.to_string()))?;

        let mode = match &self.mode {
            ModeSpec::Fixed { u } => AttentionMode::Fixed { u: *u },
            ModeSpec::Coupled(ap) => AttentionMode::Coupled(ap.clone()),
            ModeSpec::AboveThreshold { offset } => {
                let lmax = lambda_max
                    .ok_or_else(|| Error::config("mode.above_threshold", "graph has no Perron root"))?;
                let lmin = match &spectrum {
                    Some(s) => s.lambda_min,
                    None if self.params.gamma < 0.0 => {
                        return Err(Error::config("mode.above_threshold", "disagreement threshold needs an undirected graph"))
                    }
                    None => f64::NAN,
                };
                let uc = u_critical(&params, lmax, lmin).map_err(|e| Error::config("mode.above_threshold", e.to_string()))?;
                let u = uc + offset;
                if !(u >= 0.0) {
                    return Err(Error::config("mode.above_threshold.offset", "resulting attention is negative"));
                }
                AttentionMode::Fixed { u }
            }
        };

        let x0 = self.draw_initial(n)?;
        let u0 = mode.is_coupled().then(|| vec![self.initial.u0; n]);
        let cascade = match (&mode, &self.cascade) {
            (AttentionMode::Coupled(_), Some(cc)) => Some(*cc),
            (AttentionMode::Coupled(ap), None) => Some(CascadeCriteria::defaults_for(ap)),
            _ => None,
        };
        Ok(ResolvedScenario {
            graph,
            spectrum,
            lambda_max,
            params,
            mode,
            x0,
            u0,
            target,
            integrator: self.horizon.into(),
            cascade,
        })
    }

    fn resolve_bias(&self, n: usize, spectrum: Option<&SpectralSummary>) -> Result<(Vec<f64>, Option<usize>)> {
        match &self.bias {
            BiasSpec::Uniform(v) => Ok((vec![*v; n], None)),
            BiasSpec::PerAgent(v) => {
                if v.len() != n {
                    return Err(Error::config("bias.per_agent", format!("has {} entries for {n} agents", v.len())));
                }
                Ok((v.clone(), None))
            }
            BiasSpec::Target { agent, value } => {
                let i = select_target(*agent, n, spectrum)?;
                let mut b = vec![0.0; n];
                b[i] = *value;
                Ok((b, Some(i)))
            }
        }
    }

    fn draw_initial(&self, n: usize) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.initial.seed);
        Ok(match &self.initial.distribution {
            InitialDistribution::Zero => vec![0.0; n],
            InitialDistribution::Uniform { low, high } => {
                let dist = Uniform::new(*low, *high).map_err(|e| Error::config("initial.distribution", e.to_string()))?;
                (0..n).map(|_| dist.sample(&mut rng)).collect()
            }
            InitialDistribution::Normal { mean, std } => {
                let dist = Normal::new(*mean, *std).map_err(|e| Error::config("initial.distribution", e.to_string()))?;
                (0..n).map(|_| dist.sample(&mut rng)).collect()
            }
            InitialDistribution::Values(v) => {
                if v.len() != n {
                    return Err(Error::config("initial.distribution.values", format!("has {} entries for {n} agents", v.len())));
                }
                v.clone()
            }
        })
    }
}

/// Index of the extreme entry of `values`; near-ties go to the lowest index.
fn extreme(values: &[f64], largest: bool) -> usize {
    let best = if largest {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let tol = 1e-9 * best.abs().max(1e-12);
    values
        .iter()
        .position(|v| (v - best).abs() <= tol)
        .expect("non-empty values")
}

pub fn select_target(sel: TargetSelect, n: usize, spectrum: Option<&SpectralSummary>) -> Result<usize> {
    let field = "bias.target.agent";
    match sel {
        TargetSelect::Index(i) if i >= 1 && i <= n => Ok(i - 1),
        TargetSelect::Index(i) => Err(Error::config(field, format!("agent {i} outside 1..={n}"))),
        TargetSelect::MostCentral | TargetSelect::LeastCentral => {
            let c = spectrum
                .and_then(|s| s.centrality.as_ref())
                .ok_or_else(|| Error::config(field, "centrality needs a connected undirected graph"))?;
            Ok(extreme(c, sel == TargetSelect::MostCentral))
        }
        TargetSelect::MaxLambdaMinEntry | TargetSelect::MinLambdaMinEntry => {
            let w = spectrum
                .and_then(|s| s.min_vector())
                .ok_or_else(|| Error::config(field, "needs an undirected graph with a simple lambda_min"))?;
            let mags: Vec<f64> = w.iter().map(|v| v.abs()).collect();
            Ok(extreme(&mags, sel == TargetSelect::MaxLambdaMinEntry))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{
                "name": "t",
                "graph": {"generator": {"family": "star", "n": 5}},
                "params": {"d": 1.0, "alpha": 1.2, "gamma": -1.3},
                "mode": {"above_threshold": {"offset": 0.01}},
                "initial": {"distribution": {"uniform": {"low": -1.0, "high": 1.0}}, "seed": 3}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn resolves_threshold_offset() {
        let r = base().resolve(Path::new(".")).unwrap();
        let AttentionMode::Fixed { u } = r.mode else { panic!() };
        let ud = 1.0 / (1.2 + 1.3 * 2.0);
        assert!((u - ud - 0.01).abs() < 1e-10);
        assert_eq!(r.x0.len(), 5);
        assert!(r.x0.iter().all(|v| v.abs() < 1.0));
        assert!(r.u0.is_none() && r.cascade.is_none());
    }

    #[test]
    fn initial_draw_is_seeded() {
        let a = base().resolve(Path::new(".")).unwrap().x0;
        let b = base().resolve(Path::new(".")).unwrap().x0;
        assert_eq!(a, b);
        let mut other = base();
        other.initial.seed = 4;
        assert_ne!(other.resolve(Path::new(".")).unwrap().x0, a);
    }

    #[test]
    fn targets() {
        let mut cfg = base();
        cfg.bias = BiasSpec::Target {
            agent: TargetSelect::MostCentral,
            value: 0.4,
        };
        let r = cfg.resolve(Path::new(".")).unwrap();
        assert_eq!(r.target, Some(0));
        assert_eq!(r.params.bias, vec![0.4, 0.0, 0.0, 0.0, 0.0]);

        cfg.bias = BiasSpec::Target {
            agent: TargetSelect::LeastCentral,
            value: 0.4,
        };
        assert_eq!(cfg.resolve(Path::new(".")).unwrap().target, Some(1));

        cfg.bias = BiasSpec::Target {
            agent: TargetSelect::Index(5),
            value: 0.4,
        };
        assert_eq!(cfg.resolve(Path::new(".")).unwrap().target, Some(4));
        cfg.bias = BiasSpec::Target {
            agent: TargetSelect::Index(6),
            value: 0.4,
        };
        assert!(matches!(cfg.resolve(Path::new(".")), Err(Error::Config { .. })));
    }

    #[test]
    fn lambda_min_target_needs_simple_eigenvalue() {
        let mut cfg = base();
        cfg.graph = GraphSource::Generator(GeneratorSpec::Cycle { n: 5 });
        cfg.bias = BiasSpec::Target {
            agent: TargetSelect::MaxLambdaMinEntry,
            value: 0.4,
        };
        let err = cfg.resolve(Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("bias.target.agent"));
    }

    #[test]
    fn field_level_errors() {
        let bad = |patch: &str, field: &str| {
            let mut v: serde_json::Value = serde_json::to_value(base()).unwrap();
            let p: serde_json::Value = serde_json::from_str(patch).unwrap();
            for (k, val) in p.as_object().unwrap() {
                v[k] = val.clone();
            }
            let err = ExperimentConfig::from_json(&v.to_string()).unwrap_err();
            assert!(err.to_string().contains(field), "{err} should mention {field}");
        };
        bad(r#"{"params": {"d": 0.0, "alpha": 1.0, "gamma": 1.0}}"#, "params.d");
        bad(r#"{"params": {"d": 1.0, "alpha": 0.0, "gamma": 1.0}}"#, "params.alpha");
        bad(r#"{"theta": 0.0}"#, "theta");
        bad(r#"{"mode": {"fixed": {"u": -1.0}}}"#, "mode.fixed.u");
        bad(r#"{"horizon": {"t_end": 10.5, "dt": 0.01, "stride": 1.0}}"#, "horizon");
        bad(r#"{"name": "a/b"}"#, "name");
    }

    #[test]
    fn exactly_one_graph_source() {
        let text = r#"{
            "name": "t",
            "graph": {"generator": {"family": "star", "n": 5}, "file": "g.json"},
            "params": {"d": 1.0, "alpha": 1.2, "gamma": -1.3},
            "mode": {"fixed": {"u": 0.1}},
            "initial": {"distribution": "zero", "seed": 3}
        }"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn coupled_defaults_cascade_criteria() {
        let mut cfg = base();
        cfg.mode = ModeSpec::Coupled(AttentionParams::new(1.0, 10.0, 0.4, 10.0).unwrap());
        let r = cfg.resolve(Path::new(".")).unwrap();
        assert_eq!(r.u0, Some(vec![0.0; 5]));
        let cc = r.cascade.unwrap();
        assert_eq!(cc.delta1, 0.5);
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = base();
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
