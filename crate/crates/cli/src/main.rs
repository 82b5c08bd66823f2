use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand};

use burgers_cli::{run, Outcome, RunConfig, Subcommand};

/// Spectral Faedo-Galerkin solver for viscous Burgers flow, with an
/// estimates laboratory and traffic scenarios.
#[derive(Parser)]
#[command(name = "burgers", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Parser)]
struct CommonArgs {
    /// Path to a TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV outputs and the run manifest.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for parameter sweeps (default: serial).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Integrate one problem and emit trajectory diagnostics and final state.
    Solve(CommonArgs),
    /// Galerkin truncation refinement study over experiment.m_list.
    Converge(CommonArgs),
    /// Check energy, enstrophy, and uniqueness bounds along a run.
    VerifyBounds(CommonArgs),
    /// Run a traffic scenario and classify the flow pattern.
    Traffic(CommonArgs),
    /// Compare the solver against the exact-solution oracle over dt_list.
    OracleCheck(CommonArgs),
}

impl Command {
    fn split(self) -> (Subcommand, CommonArgs) {
        match self {
            Command::Solve(a) => (Subcommand::Solve, a),
            Command::Converge(a) => (Subcommand::Converge, a),
            Command::VerifyBounds(a) => (Subcommand::VerifyBounds, a),
            Command::Traffic(a) => (Subcommand::Traffic, a),
            Command::OracleCheck(a) => (Subcommand::OracleCheck, a),
        }
    }
}

fn main() -> ExitCode {
    let (cmd, args) = Cli::parse().command.split();
    let result = std::fs::read_to_string(&args.config)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", args.config.display()))
        .and_then(|text| Ok(RunConfig::parse(&text)?))
        .and_then(|config| run(cmd, &config, &args.out, args.threads));
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::BoundViolation) => {
            eprintln!("bound violation detected; see manifest.toml and bound CSVs");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
