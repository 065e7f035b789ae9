//! Shared fixtures for the benchmarks.

use hybridnc::channel::{transmit, ChannelSpec};
use hybridnc::experiment::CodeConfig;
use hybridnc::{Field, GrsCode, HybridCode, KkCode, KkDecoder, MaskedSubspace, MaskedVector, Subspace, SubspaceCode};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A `[k + d − 1, k, d]` code over `GF(q)` and a received word carrying `(d − 1)/2` errors.
pub fn grs_case(q: u32, k: usize, d: usize, seed: u64) -> (GrsCode, MaskedVector) {
    let f = Field::with_order(q).unwrap();
    let code = GrsCode::new(&f, k, d).unwrap();
    let mut r = rng(seed);
    let msg: Vec<u16> = (0..k).map(|_| r.random_range(0..q) as u16).collect();
    let mut word = code.encode(&msg).unwrap();
    for j in sample(&mut r, code.n(), (d - 1) / 2) {
        word[j] = f.add(word[j], r.random_range(1..q) as u16);
    }
    (code, MaskedVector::unmasked(word))
}

/// A KK code and a codeword with one lost dimension.
pub fn kk_case(q: u32, ell: usize, m: usize, k: usize, decoder: KkDecoder, seed: u64) -> (KkCode, Subspace) {
    let f = Field::with_order(q).unwrap();
    let code = KkCode::with_decoder(&f, ell, m, k, decoder).unwrap();
    let mut r = rng(seed);
    let sent = code.random_codeword(&mut r);
    let received = hybridnc::channel::apply_dimension_loss(&sent, ell - 1, &mut r);
    (code, received)
}

/// A hybrid code, a lifted codeword and the channel output for `(theta, omega, rho, mu)`.
pub struct HybridCase {
    pub code: HybridCode,
    pub sent: Subspace,
    pub spec: ChannelSpec,
    pub received: MaskedSubspace,
    pub received_basis: Vec<MaskedVector>,
}

pub fn hybrid_case(cfg: &CodeConfig, cell: (usize, usize, usize, usize), seed: u64) -> HybridCase {
    let code = cfg.build().unwrap();
    let mut r = rng(seed);
    let sent = code.encode(&code.inner().random_codeword(&mut r)).unwrap();
    let spec = ChannelSpec::new(cell.0, cell.1, cell.2, cell.3);
    let out = transmit(&sent, &spec, &mut r).unwrap();
    HybridCase { code, sent, spec, received: out.received, received_basis: out.received_basis }
}
