//! Seeded Monte-Carlo trials of hybrid-code decoding over a grid of channel cells.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{transmit, trial_rng, ChannelError, ChannelSpec};
use crate::gf::{Field, FieldDescriptor, FieldError, MAX_ORDER};
use crate::grs::{GrsDecoder, GrsDescriptor, GrsOptions};
use crate::hybrid::{DecodeVerdict, FailureStage, HybridCode, HybridError, HybridOptions, HybridParams};
use crate::kk::{KkCode, KkDecoder};
use crate::schema::SCHEMA_VERSION;
use crate::subspace_code::{CodeError, GrassmannCode, InnerCode, SubspaceCode};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error("channel: {0}")]
    Channel(#[from] ChannelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerKind {
    #[default]
    Kk,
    Grassmann,
}

/// Parameters of a hybrid code with a KK or full-Grassmannian inner code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub q: u32,
    pub ell: usize,
    pub m: usize,
    /// Message length of the KK inner code; ignored for the Grassmannian.
    #[serde(default = "one")]
    pub k: usize,
    pub d: usize,
    #[serde(default)]
    pub systematic: bool,
    #[serde(default)]
    pub inner: InnerKind,
    #[serde(default)]
    pub kk_decoder: KkDecoder,
    #[serde(default)]
    pub grs_decoder: GrsDecoder,
    #[serde(default)]
    pub max_received_dim: Option<usize>,
}

fn one() -> usize {
    1
}

impl CodeConfig {
    pub fn kk(q: u32, ell: usize, m: usize, k: usize, d: usize) -> Self {
        CodeConfig {
            q,
            ell,
            m,
            k,
            d,
            systematic: false,
            inner: InnerKind::Kk,
            kk_decoder: KkDecoder::Auto,
            grs_decoder: GrsDecoder::Auto,
            max_received_dim: None,
        }
    }

    pub fn grassmann(q: u32, ell: usize, m: usize, d: usize) -> Self {
        CodeConfig { inner: InnerKind::Grassmann, ..Self::kk(q, ell, m, 1, d) }
    }

    pub fn build(&self) -> Result<HybridCode, ExperimentError> {
        if self.q as u64 > MAX_ORDER {
            return Err(ExperimentError::Config(format!("field order {} exceeds {MAX_ORDER}", self.q)));
        }
        if self.d == 0 {
            return Err(ExperimentError::Config("d must be at least 1".into()));
        }
        let field = Field::with_order(self.q)?;
        let inner: InnerCode = match self.inner {
            InnerKind::Kk => KkCode::with_decoder(&field, self.ell, self.m, self.k, self.kk_decoder)?.into(),
            InnerKind::Grassmann => GrassmannCode::new(&field, self.ell + self.m, self.ell)?.into(),
        };
        let opts = HybridOptions {
            basis_change: None,
            grs: GrsOptions { systematic: self.systematic, decoder: self.grs_decoder, ..GrsOptions::default() },
            max_received_dim: self.max_received_dim,
        };
        Ok(HybridCode::with_options(inner, self.d, opts)?)
    }
}

/// Which hybrid decoder handles a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderChoice {
    /// Erasure decoder when no symbol errors are injected, error decoder otherwise.
    #[default]
    Auto,
    DimErasures,
    SymbolErrors,
}

impl DecoderChoice {
    pub fn resolve(self, cell: &Cell) -> DecoderChoice {
        match self {
            DecoderChoice::Auto if cell.rho == 0 => DecoderChoice::DimErasures,
            DecoderChoice::Auto => DecoderChoice::SymbolErrors,
            other => other,
        }
    }
}

/// One `(Θ, Ω, ρ, μ)` channel configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub theta: usize,
    pub omega: usize,
    pub rho: usize,
    pub mu: usize,
}

impl Cell {
    pub fn new(theta: usize, omega: usize, rho: usize, mu: usize) -> Self {
        Cell { theta, omega, rho, mu }
    }

    /// Within the guarantee of the chosen decoder for a code with parameters `D`, `d`.
    pub fn in_promise(&self, decoder: DecoderChoice, big_d: usize, d: usize) -> bool {
        match decoder.resolve(self) {
            DecoderChoice::SymbolErrors => self.theta < big_d && self.omega == 0 && 2 * self.rho + self.mu < d,
            _ => self.theta + self.omega < big_d && self.rho == 0 && self.mu < d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub code: CodeConfig,
    pub cells: Vec<Cell>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub mix: bool,
    #[serde(default)]
    pub decoder: DecoderChoice,
    /// Keep every trial in the report, not only the per-cell aggregates.
    #[serde(default)]
    pub record_trials: bool,
}

fn yes() -> bool {
    true
}

/// Every cell in the promise region of the erasure decoder or the error decoder.
pub fn promise_cells(big_d: usize, d: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for theta in 0..big_d {
        for omega in 0..big_d - theta {
            for mu in 0..d {
                out.push(Cell::new(theta, omega, 0, mu));
            }
        }
        for rho in 1..=(d - 1) / 2 {
            for mu in 0..d - 2 * rho {
                out.push(Cell::new(theta, 0, rho, mu));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell: usize,
    pub trial: usize,
    pub theta: usize,
    pub omega: usize,
    pub rho: usize,
    pub mu: usize,
    pub decoded_ok: bool,
    pub ground_truth_match: bool,
    pub failure_stage: Option<FailureStage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    #[serde(flatten)]
    pub cell: Cell,
    pub decoder: DecoderChoice,
    pub in_promise: bool,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub failures_by_stage: BTreeMap<FailureStage, usize>,
    /// Decoder returned a codeword other than the one sent.
    pub miscorrections: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub schema_version: u32,
    pub code: CodeConfig,
    pub params: HybridParams,
    pub field: FieldDescriptor,
    pub outer: GrsDescriptor,
    pub seed: u64,
    pub trials_per_cell: usize,
    pub mix: bool,
    pub cells: Vec<CellSummary>,
    pub in_promise_failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trials: Vec<TrialRecord>,
}

fn run_trial(code: &HybridCode, cell: &Cell, decoder: DecoderChoice, seed: u64, mix: bool, ci: usize, t: usize) -> Result<DecodeVerdict, ChannelError> {
    let mut rng = trial_rng(seed, ci as u32, t as u32);
    let v = code.inner().random_codeword(&mut rng);
    let sent = code.lift_subspace(&v)?;
    let spec = ChannelSpec { theta: cell.theta, omega: cell.omega, rho: cell.rho, mu: cell.mu, seed, mix };
    let out = transmit(&sent, &spec, &mut rng)?;
    let result = match decoder {
        DecoderChoice::SymbolErrors => code.decode_dim_losses_and_symbol_errors(&out.received_basis),
        _ => code.decode_dim_and_erasures(&out.received),
    };
    Ok(DecodeVerdict::new(result, &v))
}

/// Runs every cell; trials execute in parallel on the current rayon pool and
/// are reported in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialReport, ExperimentError> {
    if cfg.trials == 0 {
        return Err(ExperimentError::Config("trials must be positive".into()));
    }
    let code = cfg.code.build()?;
    let (big_d, d) = (code.big_d(), code.d());
    let mut cells = Vec::with_capacity(cfg.cells.len());
    let mut records = Vec::new();
    let mut in_promise_failures = 0;
    for (ci, cell) in cfg.cells.iter().enumerate() {
        let decoder = cfg.decoder.resolve(cell);
        let verdicts: Vec<DecodeVerdict> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(&code, cell, decoder, cfg.seed, cfg.mix, ci, t))
            .collect::<Result<_, _>>()?;
        let in_promise = cell.in_promise(decoder, big_d, d);
        let mut summary = CellSummary {
            cell: *cell,
            decoder,
            in_promise,
            trials: cfg.trials,
            successes: 0,
            success_rate: 0.0,
            failures_by_stage: BTreeMap::new(),
            miscorrections: 0,
        };
        for (t, v) in verdicts.iter().enumerate() {
            if v.ground_truth_match {
                summary.successes += 1;
            } else if let Some(stage) = v.failure_stage {
                *summary.failures_by_stage.entry(stage).or_default() += 1;
            } else {
                summary.miscorrections += 1;
            }
            if cfg.record_trials {
                records.push(TrialRecord {
                    cell: ci,
                    trial: t,
                    theta: cell.theta,
                    omega: cell.omega,
                    rho: cell.rho,
                    mu: cell.mu,
                    decoded_ok: v.ok,
                    ground_truth_match: v.ground_truth_match,
                    failure_stage: v.failure_stage,
                });
            }
        }
        summary.success_rate = summary.successes as f64 / cfg.trials as f64;
        if in_promise {
            in_promise_failures += cfg.trials - summary.successes;
        }
        cells.push(summary);
    }
    Ok(TrialReport {
        schema_version: SCHEMA_VERSION,
        code: cfg.code.clone(),
        params: code.params(),
        field: code.inner().field().descriptor(),
        outer: code.outer().descriptor(),
        seed: cfg.seed,
        trials_per_cell: cfg.trials,
        mix: cfg.mix,
        cells,
        in_promise_failures,
        trials: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promise_region_listing() {
        let cells = promise_cells(2, 3);
        assert!(cells.contains(&Cell::new(1, 0, 1, 0)));
        assert!(cells.contains(&Cell::new(0, 1, 0, 2)));
        assert!(!cells.contains(&Cell::new(1, 1, 0, 0)));
        assert!(cells.iter().all(|c| c.in_promise(DecoderChoice::Auto, 2, 3)));
        assert!(!Cell::new(0, 1, 1, 0).in_promise(DecoderChoice::Auto, 2, 3));
    }

    #[test]
    fn small_run_is_deterministic_and_clean() {
        let cfg = ExperimentConfig {
            code: CodeConfig::kk(7, 2, 2, 1, 3),
            cells: promise_cells(2, 3),
            trials: 40,
            seed: 17,
            mix: true,
            decoder: DecoderChoice::Auto,
            record_trials: true,
        };
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.in_promise_failures, 0);
        assert!(a.cells.iter().all(|c| c.success_rate == 1.0));
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.trials.len(), 40 * cfg.cells.len());
    }

    #[test]
    fn config_rejects_unknown_fields() {
        let json = r#"{"q":5,"ell":2,"m":2,"d":2,"bogus":1}"#;
        assert!(serde_json::from_str::<CodeConfig>(json).is_err());
        let ok: CodeConfig = serde_json::from_str(r#"{"q":5,"ell":2,"m":2,"d":2}"#).unwrap();
        assert_eq!(ok, CodeConfig::kk(5, 2, 2, 1, 2));
    }
}
