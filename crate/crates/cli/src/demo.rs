use anyhow::{bail, ensure};
use clap::Args;
use hybridnc::schema::{SubspaceRecord, SCHEMA_VERSION};
use hybridnc::{Field, FieldRef, GrsCode, GrsOptions, HybridCode, KkCode, MaskedVector, Matrix, Subspace};
use serde::{Deserialize, Serialize};

use crate::output::{emit, resolve};
use crate::{Failure, Globals};

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemoArgs {
    /// Field order, at least 8.
    #[arg(long, default_value_t = 8)]
    pub q: u32,
}

impl Default for DemoArgs {
    fn default() -> Self {
        DemoArgs { q: 8 }
    }
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub schema_version: u32,
    pub q: u32,
    /// Nonzero symbols of the weight-3 codeword `u5`.
    pub x: [u16; 3],
    pub rs_outputs_as_described: bool,
    pub preimage: SubspaceRecord,
    pub dim_intersection: usize,
    pub distance: usize,
    pub decoder_outcome: String,
    pub failure_reproduced: bool,
    pub control_without_error_rs_unambiguous: bool,
    pub control_without_error_decoded: bool,
    pub control_without_gain_decoded: bool,
    pub narrative: Vec<String>,
}

#[derive(Serialize)]
struct DemoRow<'a> {
    q: u32,
    dim_intersection: usize,
    distance: usize,
    decoder_outcome: &'a str,
    failure_reproduced: bool,
    control_without_error_decoded: bool,
    control_without_gain_decoded: bool,
}

fn add(f: &FieldRef, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn spike(n: usize, entries: &[(usize, u16)]) -> Vec<u16> {
    let mut e = vec![0; n];
    for &(i, v) in entries {
        e[i] = v;
    }
    e
}

fn unmasked(rows: &[Vec<u16>]) -> Vec<MaskedVector> {
    rows.iter().cloned().map(MaskedVector::unmasked).collect()
}

pub fn build(q: u32) -> anyhow::Result<DemoReport> {
    if q < 8 {
        bail!("the scenario needs q >= 8, got {q}");
    }
    let f = Field::with_order(q)?;
    let inner = KkCode::new(&f, 3, 3, 1)?;
    let outer = GrsCode::new(&f, 6, 3)?;
    let g = outer.generator();
    let msg = g.select_columns(&[3, 4, 5, 6, 7]).transpose().kernel().row(0).to_vec();
    let u5 = g.vec_mul(&msg)?;
    ensure!(u5[..3].iter().all(|&x| x != 0), "no weight-3 codeword on the first three coordinates");
    let mut basis = vec![u5.clone()];
    for r in g.row_vecs() {
        let mut t = basis.clone();
        t.push(r);
        if basis.len() < 6 && Matrix::from_rows(&f, 8, &t)?.rank() == t.len() {
            basis = t;
        }
    }
    let mut u = basis[1..5].to_vec();
    u.push(u5.clone());
    u.push(basis[5].clone());
    let code = HybridCode::with_network_basis(inner, 3, &Matrix::from_rows(&f, 8, &u)?, GrsOptions::default())?;
    let x = [u5[0], u5[1], u5[2]];
    let big_z = Subspace::span_units(&f, 6, &[0, 1, 2]);

    let z = add(&f, &u[3], &spike(8, &[(0, x[0])]));
    let z_err = add(&f, &u[3], &spike(8, &[(0, x[0]), (1, x[1])]));
    let received = vec![add(&f, &u[0], &z), add(&f, &u[1], &z), z_err];
    let rs: Vec<Vec<u16>> = received
        .iter()
        .map(|r| outer.decode(&MaskedVector::unmasked(r.clone())))
        .collect::<Result<_, _>>()?;
    let rs_ok = rs == vec![add(&f, &u[0], &u[3]), add(&f, &u[1], &u[3]), add(&f, &u[3], &u[4])];
    let v_tilde = code.unlift_subspace(&Subspace::from_rows(&f, 8, &rs)?)?;
    let meet = big_z.intersect(&v_tilde)?;
    let distance = big_z.distance(&v_tilde)?;
    let witness = spike(6, &[(0, 1), (1, f.neg(1))]);
    let result = code.decode_dim_losses_and_symbol_errors(&unmasked(&received));
    let (outcome, reproduced) = match &result {
        Ok(v) if *v == big_z => ("recovered Z".to_string(), false),
        Ok(_) => ("returned a different codeword".to_string(), true),
        Err(e) => (format!("failed: {e}"), true),
    };

    let clean = vec![add(&f, &u[0], &z), add(&f, &u[1], &z), z.clone()];
    let clean_rs: Vec<Vec<u16>> = clean
        .iter()
        .map(|r| outer.decode(&MaskedVector::unmasked(r.clone())))
        .collect::<Result<_, _>>()?;
    let unambiguous = clean_rs == vec![add(&f, &u[0], &u[3]), add(&f, &u[1], &u[3]), u[3].clone()];
    let clean_ok = code.decode_dim_losses_and_symbol_errors(&unmasked(&clean)).as_ref() == Ok(&big_z);
    let no_gain = vec![u[0].clone(), add(&f, &u[1], &spike(8, &[(1, x[1])]))];
    let no_gain_ok = code.decode_dim_losses_and_symbol_errors(&unmasked(&no_gain)).as_ref() == Ok(&big_z);

    let narrative = vec![
        format!("GF({q}), inner KK code l=3, m=3, k=1 (2D = 6), outer GRS [8, 6, 3]"),
        format!("u5 = ({}, {}, {}, 0, 0, 0, 0, 0) has minimum weight", x[0], x[1], x[2]),
        "sent E(Z) = <u1, u2, u3> with Z = <e1, e2, e3>".into(),
        "u3 lost, z = u4 + (x1, 0, ..., 0) injected".into(),
        "received u1 + z, u2 + z and z' = u4 + (x1, x2, 0, ..., 0)".into(),
        format!("RS stage gives u1 + u4, u2 + u4, u4 + u5: {rs_ok}"),
        format!(
            "dim(Z ^ V~) = {}, e1 - e2 in Z ^ V~: {}, D(Z, V~) = {distance}",
            meet.dim(),
            meet.contains_vector(&witness)?
        ),
        format!("decoder {outcome}"),
        format!("without the symbol error: RS stage unambiguous {unambiguous}, Z recovered {clean_ok}"),
        format!("without the gain: Z recovered {no_gain_ok}"),
    ];
    Ok(DemoReport {
        schema_version: SCHEMA_VERSION,
        q,
        x,
        rs_outputs_as_described: rs_ok,
        preimage: SubspaceRecord::from(&v_tilde),
        dim_intersection: meet.dim(),
        distance,
        decoder_outcome: outcome,
        failure_reproduced: reproduced,
        control_without_error_rs_unambiguous: unambiguous,
        control_without_error_decoded: clean_ok,
        control_without_gain_decoded: no_gain_ok,
        narrative,
    })
}

pub fn run(args: DemoArgs, g: &Globals) -> Result<(), Failure> {
    let a = resolve(args, g)?;
    let r = build(a.q)?;
    let row = DemoRow {
        q: r.q,
        dim_intersection: r.dim_intersection,
        distance: r.distance,
        decoder_outcome: &r.decoder_outcome,
        failure_reproduced: r.failure_reproduced,
        control_without_error_decoded: r.control_without_error_decoded,
        control_without_gain_decoded: r.control_without_gain_decoded,
    };
    emit(&r, &[row], &[], g)?;
    let as_described = r.rs_outputs_as_described && r.dim_intersection == 1 && r.distance == 4;
    if !(as_described && r.failure_reproduced && r.control_without_error_decoded && r.control_without_gain_decoded) {
        return Err(Failure::Decode("scenario did not behave as described".into()));
    }
    Ok(())
}
