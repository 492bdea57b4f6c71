// Automorphisms, orbits, and the orbit structure of a disagreement pattern.
// On wheel(8) the next rim mode destabilises at u ≈ 0.2823, so the attention
// stays just above u_d ≈ 0.2796.

use opinet::analysis::u_disagree;
use opinet::graph::{make_star, make_wheel};
use opinet::spectral::SpectralSummary;
use opinet::symmetry::{automorphisms, check_equivariance, check_orbit_magnitudes, orbits, PatternKind};
use opinet::{AttentionMode, IntegratorConfig, ModelParams, OpinionSystem, Result};

pub fn run_example() -> Result<()> {
    for (name, g) in [("star(6)", make_star(6)?), ("wheel(8)", make_wheel(8)?)] {
        let n = g.n_agents();
        let group = automorphisms(&g)?;
        let op = orbits(&group, n)?;
        println!("{name}: |Aut| = {}, orbits {:?}", group.len(), op.one_based());

        let p = ModelParams::unbiased(1.0, 1.2, -1.3, n)?;
        let worst = group
            .iter()
            .map(|rho| check_equivariance(&g, &p, 0.3, rho, 20, 7))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("  equivariance defect {worst:.1e}");

        let s = SpectralSummary::compute(&g.adjacency())?;
        let u = u_disagree(&p, s.lambda_min)? + 0.001;
        let sys = OpinionSystem::new(&g, p, AttentionMode::Fixed { u })?;
        let x0: Vec<f64> = (0..n).map(|i| 0.05 * (i as f64 + 1.0).sin()).collect();
        let traj = sys.simulate(&x0, None, &IntegratorConfig::with_t_end(6000.0))?;
        let r = check_orbit_magnitudes(&traj.last().x, &op, PatternKind::Disagreement, 1e-6)?;
        println!("  equal magnitudes within orbits: {}", r.ok);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
