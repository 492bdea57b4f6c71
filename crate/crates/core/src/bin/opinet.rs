use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use opinet::experiment::{analyze_trajectory, run_figure, run_scenario, ExperimentConfig, FigureId, Overrides};
use opinet::spectral::SpectralSummary;
use opinet::symmetry::{automorphisms, orbits};
use opinet::{Error, Graph, Result, Trajectory};

#[derive(Parser)]
#[command(name = "opinet", version, about = "Opinion dynamics on networks: spectra, symmetry, simulation and figures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the adjacency spectrum and centrality of a graph as JSON.
    Spectrum(GraphArgs),
    /// Print the automorphism group order and orbit partition as JSON.
    Orbits(GraphArgs),
    /// Run a scenario and write trajectory, analysis, drawing and manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Analyse a stored trajectory under a scenario config.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
        /// Write analysis.json here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the bundled figures (fig1..fig4).
    Figure {
        id: FigureId,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Scenario config whose graph is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
}

impl From<&OverrideArgs> for Overrides {
    fn from(a: &OverrideArgs) -> Self {
        Overrides {
            seed: a.seed,
            dt: a.dt,
            t_end: a.t_end,
        }
    }
}

#[derive(Serialize)]
struct OrbitOutput {
    group_order: usize,
    orbits: Vec<Vec<usize>>,
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    match (&args.config, &args.graph) {
        (Some(c), _) => ExperimentConfig::load(c)?.load_graph(base_dir(c)),
        (None, Some(g)) => Graph::load(g),
        (None, None) => Err(Error::InvalidArgument("pass --config or --graph".into())),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(args) => {
            let g = load_graph(&args)?;
            print_json(&SpectralSummary::compute(&g.adjacency())?)
        }
        Command::Orbits(args) => {
            let g = load_graph(&args)?;
            let group = automorphisms(&g)?;
            let op = orbits(&group, g.n_agents())?;
            print_json(&OrbitOutput {
                group_order: group.len(),
                orbits: op.one_based(),
            })
        }
        Command::Simulate { config, out, overrides } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            Overrides::from(&overrides).apply(&mut cfg);
            let outcome = run_scenario(&cfg, base_dir(&config))?;
            outcome.write(&out)?;
            eprintln!("wrote {} to {}", cfg.name, out.display());
            Ok(())
        }
        Command::Analyze { config, trajectory, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let traj = Trajectory::read_csv(&trajectory)?;
            let report = analyze_trajectory(&cfg, base_dir(&config), &traj)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join(opinet::experiment::scenario::REPORT_FILE), report.to_json())?;
                    Ok(())
                }
                None => print_json(&report),
            }
        }
        Command::Figure { id, out, overrides } => {
            let fig = run_figure(id, &Overrides::from(&overrides))?;
            fig.write(&out)?;
            for p in fig.summary() {
                let cascade = p.cascade.map(|c| format!(" cascade={}", c.cascade)).unwrap_or_default();
                eprintln!("{id}/{}: {:?}{cascade}", p.scenario, p.label);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } | Error::InvalidArgument(_) | Error::Json(_) | Error::Csv { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
