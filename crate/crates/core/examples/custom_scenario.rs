// A scenario described in JSON: a wheel with an input on the hub, run and
// written out as trajectory CSV, analysis JSON, SVG and manifest.

use std::path::Path;

use opinet::experiment::{run_scenario, ExperimentConfig};
use opinet::Result;

const CONFIG: &str = r#"{
  "name": "wheel-hub-input",
  "graph": { "generator": { "family": "wheel", "n": 9 } },
  "params": { "d": 1.0, "alpha": 1.2, "gamma": 1.3 },
  "mode": { "above_threshold": { "offset": -0.02 } },
  "bias": { "target": { "agent": "most_central", "value": 0.05 } },
  "initial": { "distribution": { "normal": { "mean": 0.0, "std": 0.1 } }, "seed": 11 },
  "horizon": { "t_end": 200.0, "dt": 0.01, "stride": 0.5 }
}"#;

pub fn run_example() -> Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let outcome = run_scenario(&cfg, Path::new("."))?;
    let r = &outcome.report;
    println!("{}: {:?}, input on agent {:?}", r.scenario, r.classification.label, r.input_target);
    if let Some(p) = r.input_projection {
        println!("input inside the critical eigenspace {:.4}, outside {:.4}", p.norm_in, p.norm_out);
    }
    let shown: Vec<String> = r.final_state.iter().map(|v| format!("{v:+.3}")).collect();
    println!("final opinions [{}]", shown.join(" "));

    let out = std::env::temp_dir().join("opinet-custom").join(&cfg.name);
    outcome.write(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
