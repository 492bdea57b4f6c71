// Reproduces the bundled figures and writes one output bundle per panel.
//
// `cargo run --release --example figures -- [fig1|fig2|fig3|fig4|all] [OUT_DIR]`

use std::path::Path;

use opinet::experiment::{run_figure, FigureId, Overrides};
use opinet::Result;

pub fn render_figure(id: FigureId, out: &Path) -> Result<()> {
    let fig = run_figure(id, &Overrides::default())?;
    fig.write(out)?;
    for p in fig.summary() {
        let cascade = p.cascade.map(|c| format!(", cascade {}", c.cascade)).unwrap_or_default();
        println!("{id} {:<22} {:?}{cascade}", p.scenario, p.label);
    }
    Ok(())
}

pub fn run_example() -> Result<()> {
    let out = std::env::temp_dir().join("opinet-figures");
    render_figure(FigureId::Fig1, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let which = args.first().map(String::as_str).unwrap_or("all");
    let out = Path::new(args.get(1).map(String::as_str).unwrap_or("out"));
    let ids = if which == "all" {
        FigureId::ALL.to_vec()
    } else {
        vec![which.parse()?]
    };
    for id in ids {
        render_figure(id, out)?;
    }
    println!("wrote {}", out.display());
    Ok(())
}
