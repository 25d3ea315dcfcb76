//! Command-line toolkit for equicontinuity analysis of one-dimensional
//! cellular automata.

mod cmd_blocking;
mod cmd_classify;
mod cmd_factor;
mod cmd_gilman;
mod cmd_simulate;
mod cmd_spectrum;
mod cmd_surjective;
mod input;
mod report;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "eqca",
    version,
    about = "Exact simulation, blocking-word certification, measure-theoretic \
             classification, counter factors and spectral probes for 1D cellular automata"
)]
struct Cli {
    /// Cap on worker threads. Analyses are deterministic sequential
    /// computations, so any cap yields identical output.
    #[arg(long, global = true, env = "EQCA_THREADS", value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate and render a space-time diagram
    Simulate(cmd_simulate::SimulateArgs),
    /// Decide surjectivity (uniform-measure invariance) with a witness
    Surjective(cmd_surjective::SurjectiveArgs),
    /// Classify a rule by its blocking/equicontinuity structure
    Classify(cmd_classify::ClassifyArgs),
    /// Blocking-word certification and falsification
    #[command(subcommand)]
    Blocking(cmd_blocking::BlockingCmd),
    /// Measure-theoretic equicontinuity estimation
    #[command(subcommand)]
    Gilman(cmd_gilman::GilmanCmd),
    /// Equicontinuous counter factor construction and verification
    #[command(subcommand)]
    Factor(cmd_factor::FactorCmd),
    /// Correlations, mixing tests and eigenvalue scans
    #[command(subcommand)]
    Spectrum(cmd_spectrum::SpectrumCmd),
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads == Some(0) {
        anyhow::bail!("--threads must be at least 1");
    }
    match cli.command {
        Command::Simulate(args) => cmd_simulate::run(args),
        Command::Surjective(args) => cmd_surjective::run(args),
        Command::Classify(args) => cmd_classify::run(args),
        Command::Blocking(cmd) => cmd_blocking::run(cmd),
        Command::Gilman(cmd) => cmd_gilman::run(cmd),
        Command::Factor(cmd) => cmd_factor::run(cmd),
        Command::Spectrum(cmd) => cmd_spectrum::run(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
