// Adjacency spectra of the standard graph families and the attention
// thresholds they imply.

use opinet::analysis::{u_agree, u_disagree};
use opinet::graph::{make_cycle, make_hypercube, make_path, make_star, make_wheel};
use opinet::spectral::SpectralSummary;
use opinet::{Graph, ModelParams, Result};

pub fn run_example() -> Result<()> {
    let graphs: Vec<(&str, Graph)> = vec![
        ("cycle(8)", make_cycle(8)?),
        ("path(8)", make_path(8)?),
        ("star(8)", make_star(8)?),
        ("wheel(8)", make_wheel(8)?),
        ("cube", make_hypercube(3)?),
    ];
    println!("{:<10} {:>9} {:>9} {:>5} {:>8} {:>8}", "graph", "l_max", "l_min", "m_min", "u_a", "u_d");
    for (name, g) in &graphs {
        let s = SpectralSummary::compute(&g.adjacency())?;
        let coop = ModelParams::unbiased(1.0, 1.2, 1.3, g.n_agents())?;
        let comp = ModelParams::unbiased(1.0, 1.2, -1.3, g.n_agents())?;
        println!(
            "{:<10} {:>9.5} {:>9.5} {:>5} {:>8.5} {:>8.5}",
            name,
            s.lambda_max,
            s.lambda_min,
            s.mult_min,
            u_agree(&coop, s.lambda_max)?,
            u_disagree(&comp, s.lambda_min)?
        );
    }

    let star = SpectralSummary::compute(&make_star(8)?.adjacency())?;
    let c = star.centrality.expect("star is connected");
    println!("star centrality: hub {:.4}, leaf {:.4}", c[0], c[1]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
