use clap::Args;
use hybridnc::experiment::{CodeConfig, InnerKind};
use hybridnc::schema::CodebookRecord;
use hybridnc::SubspaceCode;
use serde::Serialize;

use crate::output::{emit, load};
use crate::simulate::InnerArg;
use crate::{Failure, Globals};

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(long, default_value_t = 4)]
    pub q: u32,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = InnerArg::Kk)]
    pub inner: InnerArg,
    #[arg(long)]
    pub systematic: bool,
}

impl ConstructArgs {
    pub fn code_config(&self) -> CodeConfig {
        let mut c = CodeConfig::kk(self.q, self.ell, self.m, self.k, self.d);
        c.systematic = self.systematic;
        if let InnerArg::Grassmann = self.inner {
            c.inner = InnerKind::Grassmann;
        }
        c
    }
}

/// One basis vector of one codeword, symbols separated by spaces.
#[derive(Serialize)]
struct BasisRow {
    codeword: usize,
    row: usize,
    vector: String,
}

pub fn run(args: ConstructArgs, g: &Globals) -> Result<(), Failure> {
    let cfg = match &g.config {
        Some(p) => load::<CodeConfig>(p)?,
        None => args.code_config(),
    };
    let code = cfg.build()?;
    let words = code.codewords()?;
    let record = CodebookRecord::new(code.inner().field(), code.n(), code.ell(), &words);
    let rows: Vec<BasisRow> = record
        .codewords
        .iter()
        .enumerate()
        .flat_map(|(i, w)| {
            w.iter().enumerate().map(move |(j, r)| BasisRow {
                codeword: i,
                row: j,
                vector: r.iter().map(u16::to_string).collect::<Vec<_>>().join(" "),
            })
        })
        .collect();
    emit(&record, &rows, &["codeword", "row", "vector"], g)?;
    Ok(())
}
