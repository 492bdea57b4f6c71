// On regular graphs agreement is consensus and disagreement is dissensus.

use opinet::analysis::{classify, u_critical};
use opinet::graph::{make_cycle, make_hypercube};
use opinet::spectral::SpectralSummary;
use opinet::{AttentionMode, IntegratorConfig, ModelParams, OpinionSystem, Result};

pub fn run_example() -> Result<()> {
    for (name, g) in [("cycle(8)", make_cycle(8)?), ("cube", make_hypercube(3)?)] {
        let s = SpectralSummary::compute(&g.adjacency())?;
        let x0: Vec<f64> = (0..g.n_agents()).map(|i| ((i * 7 % 5) as f64 - 1.5) / 4.0).collect();
        for gamma in [0.5, -0.5] {
            let p = ModelParams::unbiased(1.0, 0.5, gamma, g.n_agents())?;
            let u = u_critical(&p, s.lambda_max, s.lambda_min)? + 0.05;
            let sys = OpinionSystem::new(&g, p, AttentionMode::Fixed { u })?;
            let traj = sys.simulate(&x0, None, &IntegratorConfig::with_t_end(1000.0))?;
            let x = &traj.last().x;
            let c = classify(x, 0.1);
            let spread = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x.iter().cloned().fold(f64::INFINITY, f64::min);
            println!(
                "{name:<8} gamma {gamma:+}: {:?}, consensus {}, dissensus {}, spread {spread:.3}, sum {:+.2e}",
                c.label,
                c.consensus,
                c.dissensus,
                x.iter().sum::<f64>()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
