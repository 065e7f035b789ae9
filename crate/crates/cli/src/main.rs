use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod bounds;
mod compare;
mod construct;
mod decode;
mod demo;
mod output;
mod simulate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hybridnc", version, about = "Hybrid network codes: bounds, simulation and decoding")]
pub struct Cli {
    /// Master seed; overrides any seed in a config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for trial execution (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Read the subcommand's arguments from a JSON file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of Singleton and sphere-packing bounds next to the construction size.
    Bounds(bounds::BoundsArgs),
    /// Monte-Carlo decoding trials over a grid of channel cells.
    Simulate(simulate::SimulateArgs),
    /// Rebuild the dimension-gain plus symbol-error failure scenario.
    FailureDemo(demo::DemoArgs),
    /// Hybrid code versus a subspace code with the same erasure budget.
    Compare(compare::CompareArgs),
    /// Dump the codebook of a small hybrid code.
    Construct(construct::ConstructArgs),
    /// Decode one received subspace read from a file.
    Decode(decode::DecodeArgs),
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A decode inside the promise region went wrong.
    Decode(String),
    Config(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.into())
    }
}

pub struct Globals {
    pub seed: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let g = Globals { seed: cli.seed, format: cli.format, out: cli.out, config: cli.config };
    match cli.command {
        Command::Bounds(a) => bounds::run(a, &g),
        Command::Simulate(a) => simulate::run(a, &g),
        Command::FailureDemo(a) => demo::run(a, &g),
        Command::Compare(a) => compare::run(a, &g),
        Command::Construct(a) => construct::run(a, &g),
        Command::Decode(a) => decode::run(a, &g),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Decode(msg)) => {
            eprintln!("hybridnc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("hybridnc: {e:#}");
            ExitCode::from(2)
        }
    }
}
