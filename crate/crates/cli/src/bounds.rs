use clap::Args;
use hybridnc::bounds::{
    asymptotic_rates, construction_log_size, construction_rate, log_q, singleton_bound, sphere_packing_bound,
    AsymptoticParams,
};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::output::{emit, resolve};
use crate::{Failure, Globals};

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsArgs {
    /// Code lengths (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    /// Dimension-error parameter `D`.
    #[arg(long = "big-d", value_delimiter = ',')]
    pub big_d: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
}

#[derive(Debug, Serialize)]
pub struct BoundsRow {
    pub n: u64,
    pub ell: u64,
    pub big_d: u64,
    pub d: u64,
    pub q: u64,
    pub singleton: String,
    pub sphere_packing: String,
    pub constructed_m: String,
    pub log_q_m: u64,
    pub rate: f64,
    pub singleton_rate: f64,
    pub sphere_packing_rate: f64,
    /// `M / singleton`.
    pub order_ratio: f64,
}

#[derive(Serialize)]
struct BoundsReport<'a> {
    schema_version: u32,
    rows: &'a [BoundsRow],
}

const HEADERS: &[&str] = &[
    "n", "ell", "big_d", "d", "q", "singleton", "sphere_packing", "constructed_m", "log_q_m", "rate", "singleton_rate",
    "sphere_packing_rate", "order_ratio",
];

pub fn row(n: u64, ell: u64, big_d: u64, d: u64, q: u64) -> anyhow::Result<BoundsRow> {
    let singleton = singleton_bound(n, ell, big_d, d, q)?;
    let packing = sphere_packing_bound(n, ell, big_d, d, q)?;
    let log_m = construction_log_size(n, ell, big_d, d)?;
    let m = BigUint::from(q).pow(log_m as u32);
    let rates = asymptotic_rates(AsymptoticParams::from_code(n, ell, big_d, d)?, n, ell);
    let ratio = (q as f64).powf(log_m as f64 - log_q(&singleton, q));
    Ok(BoundsRow {
        n,
        ell,
        big_d,
        d,
        q,
        singleton: singleton.to_string(),
        sphere_packing: packing.to_string(),
        constructed_m: m.to_string(),
        log_q_m: log_m,
        rate: construction_rate(n, ell, big_d, d)?,
        singleton_rate: rates.singleton_rate,
        sphere_packing_rate: rates.sphere_packing_rate,
        order_ratio: ratio,
    })
}

pub fn run(args: BoundsArgs, g: &Globals) -> Result<(), Failure> {
    let a = resolve(args, g)?;
    let mut rows = Vec::new();
    for &q in &a.q {
        for &n in &a.n {
            for &ell in &a.ell {
                for &big_d in &a.big_d {
                    for &d in &a.d {
                        rows.push(row(n, ell, big_d, d, q)?);
                    }
                }
            }
        }
    }
    emit(&BoundsReport { schema_version: hybridnc::schema::SCHEMA_VERSION, rows: &rows }, &rows, HEADERS, g)?;
    Ok(())
}
