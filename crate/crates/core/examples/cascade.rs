// Attention feedback and opinion cascades: an input on one agent of a
// binary tree, placed centrally or on a leaf.
//
// Attention integrates the squared opinions an agent observes. The default
// law observes neighbours only; `observe_self` adds the agent's own opinion.

use opinet::analysis::{detect_cascade, rms, CascadeCriteria};
use opinet::graph::make_balanced_tree;
use opinet::spectral::SpectralSummary;
use opinet::{AttentionMode, AttentionParams, IntegratorConfig, ModelParams, OpinionSystem, Result};

pub fn run_example() -> Result<()> {
    let g = make_balanced_tree(2, 3)?;
    let n = g.n_agents();
    let vc = SpectralSummary::compute(&g.adjacency())?.centrality.expect("connected");
    let central = (0..n).fold(0, |b, i| if vc[i] > vc[b] + 1e-12 { i } else { b });
    let leaf = n - 1;
    let x0: Vec<f64> = (0..n).map(|i| 0.01 * ((i * 37 % 11) as f64 - 5.0)).collect();

    for observe_self in [false, true] {
        let mut ap = AttentionParams::new(1.0, 10.0, 0.4, 10.0)?;
        ap.observe_self = observe_self;
        let cc = CascadeCriteria::defaults_for(&ap);
        for (label, target) in [("central", central), ("leaf", leaf)] {
            let mut b = vec![0.0; n];
            b[target] = 0.4;
            let p = ModelParams::new(1.0, 1.0, -1.0, b)?;
            let sys = OpinionSystem::new(&g, p.clone(), AttentionMode::Coupled(ap.clone()))?;
            let traj = sys.simulate(&x0, Some(&vec![0.0; n]), &IntegratorConfig::with_t_end(300.0))?;
            let v = detect_cascade(&traj, &ap, &p, &cc)?;
            let last = traj.last();
            println!(
                "observe_self {observe_self:<5} input on {label:<7} (agent {:>2}): cascade {:<5} onset {:?}, rms x {:.3}, rms u {:.3}",
                target + 1,
                v.cascade,
                v.onset,
                rms(&last.x),
                rms(last.u.as_deref().unwrap_or(&[]))
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
