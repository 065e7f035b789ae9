use std::path::PathBuf;

use clap::Args;
use hybridnc::experiment::CodeConfig;
use hybridnc::schema::{MaskedRecord, SubspaceRecord, VerdictRecord};
use hybridnc::{FailureStage, SubspaceCode};
use serde::Serialize;

use crate::output::{emit, load};
use crate::simulate::DecoderArg;
use crate::{Failure, Globals};

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    /// Code parameters as JSON.
    #[arg(long)]
    pub code: PathBuf,
    /// Received basis vectors; `null` marks an erased symbol.
    #[arg(long)]
    pub received: PathBuf,
    /// `auto` uses the erasure decoder. `symbol-errors` needs every received
    /// vector within the outer code's error radius.
    #[arg(long, value_enum, default_value_t = DecoderArg::Auto)]
    pub decoder: DecoderArg,
    /// Transmitted codeword to compare against, either the inner codeword or its lift.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerdictRow<'a> {
    ok: bool,
    failure_stage: &'a str,
    ground_truth_match: bool,
    decoded_dim: Option<usize>,
}

pub fn run(args: DecodeArgs, g: &Globals) -> Result<(), Failure> {
    let code = load::<CodeConfig>(&args.code)?.build()?;
    let field = code.inner().field().clone();
    let received = load::<MaskedRecord>(&args.received)?;
    if received.n != code.n() {
        return Err(anyhow::anyhow!("received length {} differs from code length {}", received.n, code.n()).into());
    }
    let truth = match &args.truth {
        Some(p) => {
            let t = load::<SubspaceRecord>(p)?.to_subspace(&field)?;
            Some(if t.ambient_dim() == code.n() { code.unlift_subspace(&t)? } else { t })
        }
        None => None,
    };
    let result = match args.decoder {
        DecoderArg::Auto | DecoderArg::DimErasures => code.decode_dim_and_erasures(&received.to_masked(&field)?),
        DecoderArg::SymbolErrors => code.decode_dim_losses_and_symbol_errors(&received.to_vectors(&field)?),
    };
    let record = match result {
        Ok(v) => VerdictRecord {
            ok: true,
            ground_truth_match: truth.as_ref() == Some(&v),
            decoded: Some(SubspaceRecord::from(&v)),
            failure_stage: None,
            failure: None,
        },
        Err(e) => VerdictRecord {
            ok: false,
            decoded: None,
            failure_stage: Some(e.stage),
            failure: Some(e.failure),
            ground_truth_match: false,
        },
    };
    let row = VerdictRow {
        ok: record.ok,
        failure_stage: record.failure_stage.map_or("", FailureStage::as_str),
        ground_truth_match: record.ground_truth_match,
        decoded_dim: record.decoded.as_ref().map(|d| d.rows.len()),
    };
    emit(&record, &[row], &[], g)?;
    if !record.ok {
        return Err(Failure::Decode("decoding failed".into()));
    }
    if truth.is_some() && !record.ground_truth_match {
        return Err(Failure::Decode("decoded codeword differs from the truth".into()));
    }
    Ok(())
}
