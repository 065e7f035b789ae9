//! The lifted linearized-polynomial subspace code `[ℓ+m, ℓ, mk, 2(ℓ−k+1)]_q`.
//!
//! A message is a `q`-polynomial `f(x) = Σ_{i<k} c_i x^{q^i}` over GF(q^m).
//! Its codeword is the row space of `(e_i | f(α_i))`, `i = 1..ℓ`, with `α_i`
//! the first `ℓ` elements of the polynomial basis `{1, β, …}` and `f(α_i)`
//! written in coordinates over GF(q).

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::failure::DecodeFailure;
use crate::gf::{Field, FieldRef};
use crate::linalg::{Matrix, Subspace};
use crate::poly::{linearized_eval, Linearized};
use crate::subspace_code::{CodeError, SubspaceCode, CODEBOOK_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KkDecoder {
    /// Codebook scan when the codebook fits under the limit, interpolation otherwise.
    #[default]
    Auto,
    Exhaustive,
    Interpolation,
}

#[derive(Debug, Clone)]
pub struct KkCode {
    base: FieldRef,
    ext: FieldRef,
    ell: usize,
    m: usize,
    k: usize,
    alphas: Vec<u16>,
    decoder: KkDecoder,
    codebook: Arc<OnceLock<Result<Vec<Subspace>, CodeError>>>,
}

impl KkCode {
    pub fn new(base: &FieldRef, ell: usize, m: usize, k: usize) -> Result<Self, CodeError> {
        Self::with_decoder(base, ell, m, k, KkDecoder::Auto)
    }

    pub fn with_decoder(base: &FieldRef, ell: usize, m: usize, k: usize, decoder: KkDecoder) -> Result<Self, CodeError> {
        if ell == 0 || ell > m {
            return Err(CodeError::Invalid(format!("need 1 <= l <= m, got l={ell}, m={m}")));
        }
        if k == 0 || k > ell {
            return Err(CodeError::Invalid(format!("need 1 <= k <= l, got k={k}, l={ell}")));
        }
        let ext = Field::extension(base, m as u32)?;
        let q = base.order();
        let alphas = (0..ell).map(|i| q.pow(i as u32) as u16).collect();
        Ok(KkCode { base: base.clone(), ext, ell, m, k, alphas, decoder, codebook: Arc::new(OnceLock::new()) })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn extension(&self) -> &FieldRef {
        &self.ext
    }

    pub fn decoder(&self) -> KkDecoder {
        match self.decoder {
            KkDecoder::Auto if self.size() <= BigUint::from(CODEBOOK_LIMIT) => KkDecoder::Exhaustive,
            KkDecoder::Auto => KkDecoder::Interpolation,
            other => other,
        }
    }

    pub fn with_backend(&self, decoder: KkDecoder) -> KkCode {
        KkCode { decoder, ..self.clone() }
    }

    /// Number of messages `Q^k`, `Q = q^m`.
    pub fn message_count(&self) -> Option<u64> {
        (self.ext.order() as u64).checked_pow(self.k as u32)
    }

    /// Message with index `idx` in base-`Q` digits.
    pub fn message(&self, mut idx: u64) -> Vec<u16> {
        let qm = self.ext.order() as u64;
        (0..self.k)
            .map(|_| {
                let d = (idx % qm) as u16;
                idx /= qm;
                d
            })
            .collect()
    }

    pub fn encode(&self, msg: &[u16]) -> Result<Subspace, CodeError> {
        if msg.len() != self.k {
            return Err(CodeError::Invalid(format!("message needs {} coefficients, got {}", self.k, msg.len())));
        }
        if msg.iter().any(|&c| c as u32 >= self.ext.order()) {
            return Err(CodeError::Invalid("message coefficient outside GF(q^m)".into()));
        }
        let q = self.base.order();
        let n = self.ell + self.m;
        let mut g = Matrix::zeros(&self.base, self.ell, n);
        for (i, &alpha) in self.alphas.iter().enumerate() {
            g.set(i, i, 1);
            let y = linearized_eval(&self.ext, msg, alpha, q);
            for (j, c) in self.ext.coordinates(y).into_iter().enumerate() {
                g.set(i, self.ell + j, c);
            }
        }
        Ok(Subspace::from_matrix(&g))
    }

    /// Materializes and caches every codeword, refusing above the limit.
    pub fn codebook(&self) -> Result<&[Subspace], CodeError> {
        let res = self.codebook.get_or_init(|| {
            let count = self.message_count().filter(|&c| c <= CODEBOOK_LIMIT);
            let count = count.ok_or_else(|| CodeError::ScaleGuard { size: self.size().to_string(), limit: CODEBOOK_LIMIT })?;
            (0..count).map(|i| self.encode(&self.message(i))).collect()
        });
        match res {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// Smallest distance between distinct codewords. Uses `D(V_f, V_g) = D(V_{f−g}, V_0)`,
    /// so one pass against the zero message suffices.
    pub fn minimum_distance(&self) -> Result<usize, CodeError> {
        let book = self.codebook()?;
        let zero = &book[0];
        Ok(book[1..].iter().map(|v| v.distance(zero).expect("same ambient")).min().unwrap_or(usize::MAX))
    }

    fn decode_exhaustive(&self, received: &Subspace) -> Result<Subspace, DecodeFailure> {
        let book = self.codebook().map_err(|e| DecodeFailure::invalid(e.to_string()))?;
        let radius = self.correction_param() - 1;
        book.iter()
            .find(|v| v.distance(received).expect("same ambient") <= radius)
            .cloned()
            .ok_or(DecodeFailure::BeyondRadius)
    }

    /// Finds `Q(x, y) = Q_x(x) + Q_y(y)` vanishing on the received basis, with
    /// `qdeg Q_x < τ` and `qdeg Q_y < τ − k + 1`, then solves `Q_y ∘ f = −Q_x`.
    fn decode_interpolation(&self, received: &Subspace) -> Result<Subspace, DecodeFailure> {
        let f = &*self.ext;
        let q = self.base.order() as u64;
        let r = received.dim();
        let tau = self.k.max((r + self.k).div_ceil(2));
        if tau > self.m {
            return Err(DecodeFailure::BeyondRadius);
        }
        let nx = tau;
        let ny = tau + 1 - self.k;
        let mut sys = Matrix::zeros(&self.ext, r, nx + ny);
        for (row, v) in received.basis_rows().iter().enumerate() {
            let x = f.from_coordinates(&v[..self.ell]).expect("base digits");
            let y = f.from_coordinates(&v[self.ell..]).expect("base digits");
            let (mut xp, mut yp) = (x, y);
            for i in 0..nx {
                sys.set(row, i, xp);
                if i < ny {
                    sys.set(row, nx + i, yp);
                    yp = f.pow(yp, q);
                }
                xp = f.pow(xp, q);
            }
        }
        let kernel = sys.kernel();
        if kernel.rows() == 0 {
            return Err(DecodeFailure::BeyondRadius);
        }
        let sol = kernel.row(0);
        let qx = Linearized::new(&self.ext, sol[..nx].to_vec());
        let qy = Linearized::new(&self.ext, sol[nx..].to_vec());
        if qy.is_zero() {
            return Err(DecodeFailure::BeyondRadius);
        }
        let (fpoly, rem) = qx.neg().left_divide(&qy).map_err(|_| DecodeFailure::BeyondRadius)?;
        if !rem.is_zero() || fpoly.q_degree().is_some_and(|d| d >= self.k) {
            return Err(DecodeFailure::BeyondRadius);
        }
        let mut msg = fpoly.coeffs().to_vec();
        msg.resize(self.k, 0);
        let v = self.encode(&msg).map_err(|e| DecodeFailure::invalid(e.to_string()))?;
        if v.distance(received).expect("same ambient") + 1 > self.correction_param() {
            return Err(DecodeFailure::BeyondRadius);
        }
        Ok(v)
    }
}

impl SubspaceCode for KkCode {
    fn field(&self) -> &FieldRef {
        &self.base
    }

    fn ambient_dim(&self) -> usize {
        self.ell + self.m
    }

    fn dimension(&self) -> usize {
        self.ell
    }

    fn correction_param(&self) -> usize {
        self.ell - self.k + 1
    }

    fn size(&self) -> BigUint {
        BigUint::from(self.base.order()).pow((self.m * self.k) as u32)
    }

    fn decode(&self, received: &Subspace) -> Result<Subspace, DecodeFailure> {
        if received.ambient_dim() != self.ambient_dim() {
            return Err(DecodeFailure::invalid("ambient dimension mismatch"));
        }
        if !received.field().same_field(&self.base) {
            return Err(DecodeFailure::invalid("received subspace is over a different field"));
        }
        match self.decoder() {
            KkDecoder::Interpolation => self.decode_interpolation(received),
            _ => self.decode_exhaustive(received),
        }
    }

    fn random_codeword(&self, rng: &mut dyn RngCore) -> Subspace {
        let qm = self.ext.order();
        let msg: Vec<u16> = (0..self.k).map(|_| rng.random_range(0..qm) as u16).collect();
        self.encode(&msg).expect("valid message")
    }

    fn codewords(&self) -> Result<Vec<Subspace>, CodeError> {
        Ok(self.codebook()?.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_message_spans_first_units() {
        let f = Field::new(3, 1).unwrap();
        let c = KkCode::new(&f, 2, 3, 1).unwrap();
        let v = c.encode(&[0]).unwrap();
        assert_eq!(v, Subspace::span_units(&f, 5, &[0, 1]));
    }

    #[test]
    fn small_codebook_all_pairs() {
        let f = Field::new(2, 1).unwrap();
        let c = KkCode::new(&f, 2, 2, 1).unwrap();
        let book = c.codebook().unwrap();
        assert_eq!(book.len(), 4);
        for (i, a) in book.iter().enumerate() {
            assert_eq!(a.dim(), 2);
            for b in &book[i + 1..] {
                assert!(a.distance(b).unwrap() >= 4);
            }
        }
        assert_eq!(c.minimum_distance().unwrap(), 4);
    }

    #[test]
    fn codebook_sizes_and_distance() {
        let f5 = Field::new(5, 1).unwrap();
        let c = KkCode::new(&f5, 3, 3, 1).unwrap();
        assert_eq!(c.codebook().unwrap().len(), 125);
        assert_eq!(c.minimum_distance().unwrap(), 6);
        let f2 = Field::new(2, 1).unwrap();
        for (ell, m, k) in [(3, 4, 2), (2, 3, 2), (3, 3, 2)] {
            let c = KkCode::new(&f2, ell, m, k).unwrap();
            let book = c.codebook().unwrap();
            assert_eq!(book.len() as u64, 2u64.pow((m * k) as u32));
            assert_eq!(book.iter().collect::<std::collections::HashSet<_>>().len(), book.len());
            assert!(c.minimum_distance().unwrap() >= 2 * (ell - k + 1));
        }
    }

    #[test]
    fn loss_of_one_dimension_is_corrected() {
        let f = Field::new(5, 1).unwrap();
        let c = KkCode::new(&f, 3, 3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for backend in [KkDecoder::Exhaustive, KkDecoder::Interpolation] {
            let c = c.with_backend(backend);
            for _ in 0..20 {
                let v = c.random_codeword(&mut rng);
                assert_eq!(c.decode(&v).unwrap(), v);
                let lost = Subspace::from_matrix(&v.basis().select_rows(&[0, 2]));
                assert_eq!(c.decode(&lost).unwrap(), v, "{backend:?}");
            }
        }
    }

    #[test]
    fn interpolation_matches_scan_on_random_inputs() {
        let f = Field::new(2, 1).unwrap();
        let c = KkCode::new(&f, 3, 4, 1).unwrap();
        let scan = c.with_backend(KkDecoder::Exhaustive);
        let interp = c.with_backend(KkDecoder::Interpolation);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let v = c.random_codeword(&mut rng);
            let rows = rng.random_range(1..=4usize);
            let mut m = Matrix::zeros(&f, rows, 7);
            for r in 0..rows {
                let keep = rng.random_bool(0.6);
                for col in 0..7 {
                    let val = if keep && r < v.dim() { v.basis().get(r, col) } else { rng.random_range(0..2) };
                    m.set(r, col, val);
                }
            }
            let u = Subspace::from_matrix(&m);
            assert_eq!(scan.decode(&u), interp.decode(&u), "{u:?}");
        }
    }
}
