//! `colony`: command-line front end for the quorum-switched migration model.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use colony_core::Execution;

#[derive(Debug, Parser)]
#[command(name = "colony", version, about = "Quorum-switched colony migration model")]
struct Cli {
    /// Directory receiving output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Suppress the stdout summary.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the summary as a single JSON object.
    #[arg(long, global = true, conflicts_with = "quiet")]
    json_only: bool,
    /// Also emit an SVG plot where the command supports one.
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads for sweeps, basins and probes (1 = sequential).
    #[arg(long, global = true, env = "COLONY_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Parameter file (flat `key = value`).
    #[arg(long)]
    pub params: PathBuf,
    /// Override a parameter, e.g. `--set n_total=150`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ParamArgs,
    /// Integration horizon (minutes).
    #[arg(long, default_value_t = 2e4)]
    pub t_max: f64,
    /// Initial assessors.
    #[arg(long, default_value_t = 0.0)]
    pub a0: f64,
    /// Initial leaders.
    #[arg(long, default_value_t = 0.0)]
    pub l0: f64,
    /// Initial carriers.
    #[arg(long, default_value_t = 0.0)]
    pub c0: f64,
    /// Initial searchers; defaults to rho N − a0 − l0 − c0.
    #[arg(long)]
    pub s0: Option<f64>,
    /// Initial passive workers at the new site.
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    N,
    Theta,
    NTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Simulated,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ParamArgs,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    /// Colony-size range `lo:hi:points`.
    #[arg(long, default_value = "0:300:200")]
    pub n_range: String,
    /// Quorum range `lo:hi:points`.
    #[arg(long, default_value = "0:50:200")]
    pub theta_range: String,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: ModeArg,
    /// Horizon of each simulated run (minutes).
    #[arg(long, default_value_t = 2e4)]
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlaneArg {
    /// Axes S0, A0, L0 with C0 = 0.
    Leaders,
    /// Axes S0, A0, C0 with L0 = 0.
    Carriers,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    #[command(flatten)]
    pub model: ParamArgs,
    #[arg(long, value_enum, default_value = "leaders")]
    pub plane: PlaneArg,
    /// Points per axis.
    #[arg(long, default_value_t = 40)]
    pub resolution: usize,
    #[arg(long, default_value_t = 2e4)]
    pub t_max: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Basin CSV written by `basin`; computed from `--params` when absent.
    #[arg(long, conflicts_with = "params")]
    pub grid: Option<PathBuf>,
    #[arg(long, required_unless_present = "grid")]
    pub params: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, value_enum, default_value = "leaders")]
    pub plane: PlaneArg,
    #[arg(long, default_value_t = 40)]
    pub resolution: usize,
    #[arg(long, default_value_t = 2e4)]
    pub t_max: f64,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub model: ParamArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trajectory of the full system.
    Simulate(SimulateArgs),
    /// Closed-form equilibria with regularity and stability.
    Equilibria(ParamArgs),
    /// Regime from the critical colony sizes.
    Classify(ParamArgs),
    /// One- or two-parameter bifurcation sweep.
    Sweep(SweepArgs),
    /// Basin-of-attraction grid of initial states.
    Basin(BasinArgs),
    /// Line fit through the basin boundary.
    FitBoundary(FitArgs),
    /// Random-start convergence test of the above-quorum branch.
    Probe(ProbeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = Execution::from_workers(cli.workers);
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a, cli.svg),
        Command::Equilibria(a) => commands::equilibria(a),
        Command::Classify(a) => commands::classify(a),
        Command::Sweep(a) => commands::sweep(a, exec, cli.svg),
        Command::Basin(a) => commands::basin(a, exec, cli.svg),
        Command::FitBoundary(a) => commands::fit_boundary(a, exec),
        Command::Probe(a) => commands::probe(a, exec),
    };
    let report = result.and_then(|report| {
        let files = output::write_atomically(&cli.out, &report.artifacts)
            .map_err(|e| commands::CliError::Io(format!("{}: {e}", cli.out.display())))?;
        Ok((report, files))
    });
    match report {
        Ok((report, files)) => {
            if cli.json_only {
                let mut summary = report.json;
                if let serde_json::Value::Object(map) = &mut summary {
                    let names: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
                    map.insert("files".into(), names.into());
                }
                println!("{summary}");
            } else if !cli.quiet {
                for line in &report.text {
                    println!("{line}");
                }
                if !files.is_empty() {
                    let names: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
                    println!("wrote {}", names.join(", "));
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(e.code())
        }
    }
}
