use clap::Args;
use hybridnc::bounds::{comparison_margin, comparison_margin_value, construction_log_size, erasure_equivalence_constant, gaussian_coeff, optimal_d};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::output::{emit, resolve};
use crate::{Failure, Globals};

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    #[arg(long = "big-d", value_delimiter = ',')]
    pub big_d: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Threshold for the log-size margin.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub n: u64,
    pub ell: u64,
    pub big_d: u64,
    pub d: u64,
    pub q: u64,
    /// `grassmann` when `D = 1`, `kk` otherwise.
    pub hybrid_inner: &'static str,
    pub hybrid_size: String,
    /// KK code of length `n` correcting the same `D + d − 2` losses.
    pub subspace_size: String,
    /// `4` times the KK size: a ceiling on any subspace code with that capability.
    pub subspace_ceiling: String,
    pub hybrid_exceeds_ceiling: bool,
    pub margin: i64,
    pub margin_exceeds_eps: bool,
    pub d_opt: u64,
    pub erasures_per_loss: String,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    schema_version: u32,
    eps: f64,
    rows: &'a [CompareRow],
}

const HEADERS: &[&str] = &[
    "n", "ell", "big_d", "d", "q", "hybrid_inner", "hybrid_size", "subspace_size", "subspace_ceiling",
    "hybrid_exceeds_ceiling", "margin", "margin_exceeds_eps", "d_opt", "erasures_per_loss",
];

pub fn row(n: u64, ell: u64, big_d: u64, d: u64, q: u64, eps: f64) -> anyhow::Result<CompareRow> {
    anyhow::ensure!(
        q >= 2 && d >= 1 && (1..=ell).contains(&big_d) && ell < n && ell + d <= n + 1 && (big_d == 1 || 2 * ell + d <= n + 1),
        "invalid parameters n={n}, l={ell}, D={big_d}, d={d}, q={q}"
    );
    let (hybrid_inner, hybrid) = if big_d == 1 {
        ("grassmann", gaussian_coeff(n - d + 1, ell, q))
    } else {
        ("kk", BigUint::from(q).pow(construction_log_size(n, ell, big_d, d)? as u32))
    };
    let total = big_d + d - 1;
    let subspace = if total <= ell { BigUint::from(q).pow(((n - ell) * (ell - total + 1)) as u32) } else { BigUint::from(1u32) };
    let ceiling = subspace.clone() * 4u32;
    let c = erasure_equivalence_constant(n, ell)?;
    Ok(CompareRow {
        n,
        ell,
        big_d,
        d,
        q,
        hybrid_inner,
        hybrid_exceeds_ceiling: hybrid > ceiling,
        hybrid_size: hybrid.to_string(),
        subspace_size: subspace.to_string(),
        subspace_ceiling: ceiling.to_string(),
        margin: comparison_margin_value(n, ell, big_d, d),
        margin_exceeds_eps: comparison_margin(n, ell, big_d, d, eps),
        d_opt: optimal_d(n, ell, total)?,
        erasures_per_loss: format!("{}/{}", c.numer(), c.denom()),
    })
}

pub fn run(args: CompareArgs, g: &Globals) -> Result<(), Failure> {
    let a = resolve(args, g)?;
    let mut rows = Vec::new();
    for &q in &a.q {
        for &n in &a.n {
            for &ell in &a.ell {
                for &big_d in &a.big_d {
                    for &d in &a.d {
                        rows.push(row(n, ell, big_d, d, q, a.eps)?);
                    }
                }
            }
        }
    }
    emit(&CompareReport { schema_version: hybridnc::schema::SCHEMA_VERSION, eps: a.eps, rows: &rows }, &rows, HEADERS, g)?;
    Ok(())
}
