// Cooperative coupling gives agreement, competitive coupling gives
// disagreement, once attention passes the spectral threshold.

use opinet::analysis::{classify, u_critical, DEFAULT_THETA};
use opinet::graph::make_path;
use opinet::spectral::SpectralSummary;
use opinet::{AttentionMode, IntegratorConfig, ModelParams, OpinionSystem, Result};

pub fn run_example() -> Result<()> {
    let g = make_path(6)?;
    let s = SpectralSummary::compute(&g.adjacency())?;
    let x0 = [0.3, -0.5, 0.1, 0.7, -0.2, 0.4];

    for gamma in [1.3, -1.3] {
        let p = ModelParams::unbiased(1.0, 1.2, gamma, g.n_agents())?;
        let uc = u_critical(&p, s.lambda_max, s.lambda_min)?;
        for u in [uc - 0.05, uc + 0.05] {
            let sys = OpinionSystem::new(&g, p.clone(), AttentionMode::Fixed { u })?;
            let traj = sys.simulate(&x0, None, &IntegratorConfig::default())?;
            let x = &traj.last().x;
            let c = classify(x, DEFAULT_THETA);
            let shown: Vec<String> = x.iter().map(|v| format!("{v:+.3}")).collect();
            println!("gamma {gamma:+} u {u:.4} (u_c {uc:.4}): {:?} [{}]", c.label, shown.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
