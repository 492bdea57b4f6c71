//! Nonlinear opinion dynamics for networked agents choosing between two options.
//!
//! Agents hold real-valued opinions `x_i` (the sign picks an option, the magnitude
//! measures commitment) and update them through a saturated, attention-weighted
//! sum of their own and their neighbours' opinions. The extreme eigenvalues of
//! the graph's adjacency matrix set the attention at which agreement
//! (cooperative coupling) or disagreement (competitive coupling) appears; the
//! corresponding eigenvectors, the eigenvector centrality and the automorphism
//! group shape the resulting patterns. With attention feedback, an input on a
//! well-chosen agent can trigger a network-wide opinion cascade.
//!
//! Module map:
//!
//! * [`graph`]: graph families, random connected graphs, JSON I/O.
//! * [`spectral`]: Jacobi eigen-solver, Perron vectors, eigenspaces.
//! * [`dynamics`]: right-hand sides, RK4 integration, trajectory CSV.
//! * [`analysis`]: thresholds, classification, pattern and cascade checks.
//! * [`symmetry`]: automorphisms, orbits, equivariance.
//! * [`experiment`]: scenario configs, figure reproduction, report/SVG output.
//!
//! ```
//! use opinet::{analysis, graph, spectral};
//!
//! let g = graph::make_cycle(8).unwrap();
//! let s = spectral::SpectralSummary::compute(&g.adjacency()).unwrap();
//! let p = opinet::ModelParams::unbiased(1.0, 1.2, 1.3, 8).unwrap();
//! let ua = analysis::u_agree(&p, s.lambda_max).unwrap();
//! assert!((ua - 1.0 / 3.8).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod spectral;
pub mod symmetry;

pub use dynamics::{AttentionMode, AttentionParams, IntegratorConfig, ModelParams, OpinionSystem, Trajectory};
pub use error::{Error, Result};
pub use graph::Graph;
