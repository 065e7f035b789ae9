//! Exhaustive decoders over the whole codebook, used as test oracles.

use super::GrsCode;
use crate::failure::DecodeFailure;
use crate::linalg::MaskedVector;

/// Codebooks above this size are refused.
pub const CODEBOOK_LIMIT: u64 = 1_000_000;

fn codewords(code: &GrsCode) -> Result<impl Iterator<Item = Vec<u16>> + '_, DecodeFailure> {
    let q = code.field().order() as u64;
    let total = q.checked_pow(code.k() as u32).filter(|&t| t <= CODEBOOK_LIMIT);
    let total = total.ok_or_else(|| DecodeFailure::invalid("codebook too large for exhaustive search"))?;
    Ok((0..total).map(move |mut i| {
        let msg: Vec<u16> = (0..code.k())
            .map(|_| {
                let d = (i % q) as u16;
                i /= q;
                d
            })
            .collect();
        code.encode(&msg).expect("valid message")
    }))
}

fn distance(c: &[u16], r: &MaskedVector) -> usize {
    c.iter().zip(r.values()).zip(r.mask()).filter(|((a, b), m)| !**m && a != b).count()
}

/// Every codeword at minimum unmasked Hamming distance, with that distance.
pub fn nearest_codewords(code: &GrsCode, r: &MaskedVector) -> Result<(usize, Vec<Vec<u16>>), DecodeFailure> {
    let mut best = usize::MAX;
    let mut out = Vec::new();
    for c in codewords(code)? {
        let dist = distance(&c, r);
        if dist < best {
            best = dist;
            out.clear();
        }
        if dist == best {
            out.push(c);
        }
    }
    Ok((best, out))
}

/// Bounded-distance contract realized by scanning the codebook.
pub fn decode(code: &GrsCode, r: &MaskedVector) -> Result<Vec<u16>, DecodeFailure> {
    if r.len() != code.n() {
        return Err(DecodeFailure::invalid("length mismatch"));
    }
    let mu = r.erasure_count();
    if mu > code.d() - 1 {
        return Err(DecodeFailure::TooManyErasures { erased: mu, limit: code.d() - 1 });
    }
    let (dist, mut words) = nearest_codewords(code, r)?;
    if 2 * dist + mu < code.d() && words.len() == 1 {
        Ok(words.pop().unwrap())
    } else {
        Err(DecodeFailure::BeyondRadius)
    }
}
