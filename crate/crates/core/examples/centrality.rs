// Just past the threshold, opinion strength follows eigenvector centrality.
// The ordering is exact only in the limit, so the attention sits close to it.

use opinet::analysis::{check_centrality_order, u_agree, OrderTolerance};
use opinet::graph::{make_balanced_tree, make_star};
use opinet::spectral::SpectralSummary;
use opinet::{AttentionMode, IntegratorConfig, ModelParams, OpinionSystem, Result};

pub fn run_example() -> Result<()> {
    for (name, g) in [("star(6)", make_star(6)?), ("tree(2,2)", make_balanced_tree(2, 2)?)] {
        let s = SpectralSummary::compute(&g.adjacency())?;
        let vc = s.centrality.clone().expect("connected");
        let p = ModelParams::unbiased(1.0, 1.2, 1.3, g.n_agents())?;
        let u = u_agree(&p, s.lambda_max)? + 0.005;
        let sys = OpinionSystem::new(&g, p, AttentionMode::Fixed { u })?;
        let x0 = vec![0.1; g.n_agents()];
        let traj = sys.simulate(&x0, None, &IntegratorConfig::with_t_end(3000.0))?;
        let x = &traj.last().x;
        let report = check_centrality_order(x, &vc, OrderTolerance::default())?;
        println!("{name}: order respected = {}", report.ok);
        for i in 0..g.n_agents() {
            println!("  agent {:>2}  centrality {:.4}  |x| {:.4}", i + 1, vc[i], x[i].abs());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
