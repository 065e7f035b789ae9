use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use hybridnc::experiment::{promise_cells, run_experiment, Cell, CodeConfig, DecoderChoice, ExperimentConfig, InnerKind};
use hybridnc::SubspaceCode;

use crate::output::{emit, load};
use crate::{Failure, Globals};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InnerArg {
    Kk,
    Grassmann,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DecoderArg {
    Auto,
    DimErasures,
    SymbolErrors,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 7)]
    pub q: u32,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = InnerArg::Kk)]
    pub inner: InnerArg,
    #[arg(long)]
    pub systematic: bool,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Cells as `theta,omega,rho,mu` separated by `;`. Defaults to the promise region.
    #[arg(long)]
    pub cells: Option<String>,
    #[arg(long, value_enum, default_value_t = DecoderArg::Auto)]
    pub decoder: DecoderArg,
    /// Send the basis without random recombination.
    #[arg(long)]
    pub no_mix: bool,
    /// Keep per-trial records in the JSON report.
    #[arg(long)]
    pub record_trials: bool,
}

fn parse_cells(text: &str) -> anyhow::Result<Vec<Cell>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let v: Vec<usize> = s
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("cell {s:?}"))?;
            match v[..] {
                [theta, omega, rho, mu] => Ok(Cell::new(theta, omega, rho, mu)),
                _ => bail!("cell {s:?} needs four counts"),
            }
        })
        .collect()
}

fn config_from_args(a: &SimulateArgs, seed: u64) -> anyhow::Result<ExperimentConfig> {
    let mut code = CodeConfig::kk(a.q, a.ell, a.m, a.k, a.d);
    code.systematic = a.systematic;
    if let InnerArg::Grassmann = a.inner {
        code.inner = InnerKind::Grassmann;
    }
    let cells = match &a.cells {
        Some(s) => parse_cells(s)?,
        None => {
            let built = code.build()?;
            promise_cells(built.inner().correction_param(), built.d())
        }
    };
    let decoder = match a.decoder {
        DecoderArg::Auto => DecoderChoice::Auto,
        DecoderArg::DimErasures => DecoderChoice::DimErasures,
        DecoderArg::SymbolErrors => DecoderChoice::SymbolErrors,
    };
    Ok(ExperimentConfig { code, cells, trials: a.trials, seed, mix: !a.no_mix, decoder, record_trials: a.record_trials })
}

const HEADERS: &[&str] = &["cell", "trial", "theta", "omega", "rho", "mu", "decoded_ok", "ground_truth_match", "failure_stage"];

pub fn run(args: SimulateArgs, g: &Globals) -> Result<(), Failure> {
    let mut cfg = match &g.config {
        Some(p) => load::<ExperimentConfig>(p)?,
        None => config_from_args(&args, 0)?,
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if matches!(g.format, crate::Format::Csv) {
        cfg.record_trials = true;
    }
    let report = run_experiment(&cfg)?;
    emit(&report, &report.trials, HEADERS, g)?;
    if report.in_promise_failures > 0 {
        return Err(Failure::Decode(format!("{} in-promise trials failed", report.in_promise_failures)));
    }
    Ok(())
}
