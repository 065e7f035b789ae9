//! Syndrome decoding with Berlekamp–Massey and Forney's formula.
//!
//! With dual multipliers `η'_j` the syndromes are `S_r = Σ_j y_j η'_j a_j^r`
//! for `r < d − 1`, i.e. a narrow-sense RS syndrome with locators `X_j = a_j`
//! and values `Y_j = e_j η'_j`.

use super::GrsCode;
use crate::failure::DecodeFailure;
use crate::gf::Field;
use crate::linalg::MaskedVector;
use crate::poly::Poly;

pub(super) fn decode(code: &GrsCode, received: &MaskedVector) -> Result<Vec<u16>, DecodeFailure> {
    let f = &**code.field();
    let field = code.field();
    let dual = code.dual_multipliers().ok_or_else(|| DecodeFailure::invalid("syndrome decoder needs nonzero points"))?;
    let a: Vec<u16> = code.points().iter().map(|p| p.finite().expect("finite")).collect();
    let n = code.n();
    let r = code.d() - 1;
    let y = received.values();
    let erased = received.erased();
    let mu = erased.len();

    let syn: Vec<u16> = (0..r)
        .map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(f.mul(y[j], dual[j]), f.pow(a[j], i as u64)))))
        .collect();
    if syn.iter().all(|&s| s == 0) {
        return Ok(y.to_vec());
    }

    // Γ(x) = Π (1 − a_j x) over erasures
    let mut gamma = Poly::constant(field, 1);
    for &j in &erased {
        gamma = gamma.mul(&Poly::new(field, vec![1, f.neg(a[j])])).expect("same field");
    }
    let s_poly = Poly::new(field, syn.clone());
    let modified = truncate(&gamma.mul(&s_poly).expect("same field"), r);
    let seq: Vec<u16> = (mu..r).map(|i| modified.coeff(i)).collect();
    let (lambda, ell) = berlekamp_massey(f, &seq);
    if 2 * ell + mu > r {
        return Err(DecodeFailure::BeyondRadius);
    }
    let lambda = Poly::new(field, lambda);

    let mut errors = Vec::new();
    for (j, &aj) in a.iter().enumerate().take(n) {
        if received.mask()[j] {
            continue;
        }
        let inv = f.inv(aj).expect("nonzero point");
        if lambda.eval(inv) == 0 {
            errors.push(j);
        }
    }
    if errors.len() != ell {
        return Err(DecodeFailure::BeyondRadius);
    }

    let psi = lambda.mul(&gamma).expect("same field");
    let omega = truncate(&s_poly.mul(&psi).expect("same field"), r);
    let dpsi = psi.derivative();
    let mut c = y.to_vec();
    for &j in errors.iter().chain(&erased) {
        let inv = f.inv(a[j]).expect("nonzero point");
        let den = dpsi.eval(inv);
        if den == 0 {
            return Err(DecodeFailure::BeyondRadius);
        }
        // Y_j = −X_j Ω(X_j⁻¹) / Ψ'(X_j⁻¹)
        let big_y = f.neg(f.div(f.mul(a[j], omega.eval(inv)), den).expect("nonzero"));
        let e = f.div(big_y, dual[j]).expect("nonzero dual");
        c[j] = f.sub(c[j], e);
    }
    Ok(c)
}

fn truncate(p: &Poly, len: usize) -> Poly {
    Poly::new(p.field(), p.coeffs().iter().take(len).copied().collect())
}

/// Shortest LFSR generating `s`: returns the connection polynomial
/// (constant term 1) and its length.
pub(crate) fn berlekamp_massey(f: &Field, s: &[u16]) -> (Vec<u16>, usize) {
    let mut c = vec![1u16];
    let mut b = vec![1u16];
    let mut ell = 0usize;
    let mut m = 1usize;
    let mut last = 1u16;
    for i in 0..s.len() {
        let mut disc = s[i];
        for k in 1..=ell.min(c.len() - 1) {
            disc = f.add(disc, f.mul(c[k], s[i - k]));
        }
        if disc == 0 {
            m += 1;
            continue;
        }
        let coef = f.div(disc, last).expect("nonzero");
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (k, &bk) in b.iter().enumerate() {
            c[k + m] = f.sub(c[k + m], f.mul(coef, bk));
        }
        if 2 * ell <= i {
            ell = i + 1 - ell;
            b = prev;
            last = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    while c.len() > ell + 1 && c.last() == Some(&0) {
        c.pop();
    }
    (c, ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn bm_finds_known_recurrence() {
        let f = Field::new(7, 1).unwrap();
        // s_i = 3 s_{i-1} + 2 s_{i-2}  ⇒  C(x) = 1 − 3x − 2x² = 1 + 4x + 5x²
        let mut s = vec![1u16, 4];
        for i in 2..8 {
            let next = f.add(f.mul(3, s[i - 1]), f.mul(2, s[i - 2]));
            s.push(next);
        }
        let (c, ell) = berlekamp_massey(&f, &s);
        assert_eq!(ell, 2);
        assert_eq!(c, vec![1, 4, 5]);
    }
}
