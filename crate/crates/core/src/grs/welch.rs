//! Berlekamp–Welch decoding in homogeneous form, valid for every evaluation
//! set including `0` and the point at infinity.
//!
//! Unknowns are `E` of degree `≤ t` and `N` of degree `≤ t + k − 1` with
//! `N(a_j) = (y_j/η_j) E(a_j)` on each survivor; at infinity the equation
//! relates the top coefficients `N_{t+k-1} = (y/η) E_t`.

use super::{EvalPoint, GrsCode};
use crate::failure::DecodeFailure;
use crate::linalg::{MaskedVector, Matrix};
use crate::poly::Poly;

pub(super) fn decode(code: &GrsCode, received: &MaskedVector) -> Result<Vec<u16>, DecodeFailure> {
    let field = code.field();
    let f = &**field;
    let k = code.k();
    let mu = received.erasure_count();
    let t = (code.d() - 1 - mu) / 2;
    let y = received.values();
    let survivors: Vec<usize> = (0..code.n()).filter(|&j| !received.mask()[j]).collect();
    let ne = t + 1;
    let nn = t + k;
    let mut sys = Matrix::zeros(field, survivors.len(), ne + nn);
    for (row, &j) in survivors.iter().enumerate() {
        let r = f.div(y[j], code.multipliers()[j]).expect("nonzero multiplier");
        let neg_r = f.neg(r);
        match code.points()[j] {
            EvalPoint::Finite(a) => {
                let mut p = 1u16;
                for i in 0..nn {
                    if i < ne {
                        sys.set(row, i, f.mul(neg_r, p));
                    }
                    sys.set(row, ne + i, p);
                    p = f.mul(p, a);
                }
            }
            EvalPoint::Infinity => {
                sys.set(row, t, neg_r);
                sys.set(row, ne + nn - 1, 1);
            }
        }
    }
    let kernel = sys.kernel();
    if kernel.rows() == 0 {
        return Err(DecodeFailure::BeyondRadius);
    }
    let sol = kernel.row(0);
    let e = Poly::new(field, sol[..ne].to_vec());
    let num = Poly::new(field, sol[ne..].to_vec());
    if e.is_zero() {
        return Err(DecodeFailure::BeyondRadius);
    }
    let (fpoly, rem) = num.div_rem(&e).expect("nonzero divisor");
    if !rem.is_zero() || fpoly.degree().is_some_and(|deg| deg >= k) {
        return Err(DecodeFailure::BeyondRadius);
    }
    Ok(code.evaluate(&fpoly))
}
