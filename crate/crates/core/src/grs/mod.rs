//! Generalized Reed-Solomon codes and their bounded-distance decoders.
//!
//! Codewords are `(η_1 f(a_1), …, η_n f(a_n))` for `deg f < k`. Besides the
//! nonzero field elements, the evaluation set may include `0` and the point
//! at infinity, where the symbol is `η` times the coefficient of `x^{k-1}`;
//! this admits the doubly extended lengths `n = q` and `n = q + 1`.

mod bm;
pub mod reference;
mod welch;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::failure::DecodeFailure;
use crate::gf::FieldRef;
use crate::linalg::{LinalgError, MaskedVector, Matrix, Subspace};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrsError {
    #[error("length {n} needs more evaluation points than GF({q}) offers")]
    FieldTooSmall { n: usize, q: u32 },
    #[error("invalid code parameters: {0}")]
    Invalid(String),
    #[error("evaluation points must be distinct")]
    DuplicatePoint,
    #[error("column multipliers must be nonzero field elements")]
    BadMultiplier,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An evaluation point: a field element or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalPoint {
    Finite(u16),
    Infinity,
}

impl EvalPoint {
    pub fn finite(self) -> Option<u16> {
        match self {
            EvalPoint::Finite(a) => Some(a),
            EvalPoint::Infinity => None,
        }
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalPoint::Finite(a) => write!(f, "{a}"),
            EvalPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for EvalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EvalPoint::Finite(a) => s.serialize_u16(*a),
            EvalPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for EvalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u16),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(a) => Ok(EvalPoint::Finite(a)),
            Repr::Text(t) if t == "inf" => Ok(EvalPoint::Infinity),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("unknown evaluation point {t:?}"))),
        }
    }
}

/// Which algebraic decoder handles errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrsDecoder {
    /// Berlekamp–Massey when every point is finite and nonzero, Welch otherwise.
    #[default]
    Auto,
    BerlekampMassey,
    Welch,
}

#[derive(Debug, Clone, Default)]
pub struct GrsOptions {
    pub points: Option<Vec<EvalPoint>>,
    pub multipliers: Option<Vec<u16>>,
    pub systematic: bool,
    pub decoder: GrsDecoder,
}

/// Serializable description of a GRS code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsDescriptor {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub a: Vec<EvalPoint>,
    pub eta: Vec<u16>,
    pub systematic: bool,
}

#[derive(Clone)]
pub struct GrsCode {
    field: FieldRef,
    n: usize,
    k: usize,
    points: Vec<EvalPoint>,
    eta: Vec<u16>,
    generator: Matrix,
    space: Subspace,
    systematic: bool,
    decoder: GrsDecoder,
    /// Column multipliers of the parity check, present when all points are finite and nonzero.
    dual: Option<Vec<u16>>,
}

/// Default points: `α^0, …, α^{n-1}`, then `0`, then infinity.
pub fn default_points(field: &FieldRef, n: usize) -> Result<Vec<EvalPoint>, GrsError> {
    let q = field.order() as usize;
    if n > q + 1 {
        return Err(GrsError::FieldTooSmall { n, q: q as u32 });
    }
    let mut pts: Vec<EvalPoint> = (0..n.min(q - 1)).map(|i| EvalPoint::Finite(field.exp(i as u64))).collect();
    if n >= q {
        pts.push(EvalPoint::Finite(0));
    }
    if n == q + 1 {
        pts.push(EvalPoint::Infinity);
    }
    Ok(pts)
}

impl GrsCode {
    /// `[k + d − 1, k, d]` code with default points and unit multipliers.
    pub fn new(field: &FieldRef, k: usize, d: usize) -> Result<Self, GrsError> {
        Self::with_options(field, k, d, GrsOptions::default())
    }

    pub fn with_options(field: &FieldRef, k: usize, d: usize, opts: GrsOptions) -> Result<Self, GrsError> {
        if k == 0 || d == 0 {
            return Err(GrsError::Invalid(format!("need k >= 1 and d >= 1, got k={k}, d={d}")));
        }
        let n = k + d - 1;
        let points = match opts.points {
            Some(p) => p,
            None => default_points(field, n)?,
        };
        if points.len() != n {
            return Err(GrsError::Invalid(format!("expected {n} evaluation points, got {}", points.len())));
        }
        for (i, p) in points.iter().enumerate() {
            if let EvalPoint::Finite(a) = p {
                if *a as u32 >= field.order() {
                    return Err(GrsError::Invalid(format!("point {a} outside GF({})", field.order())));
                }
            }
            if points[..i].contains(p) {
                return Err(GrsError::DuplicatePoint);
            }
        }
        let eta = opts.multipliers.unwrap_or_else(|| vec![1; n]);
        if eta.len() != n || eta.iter().any(|&e| e == 0 || e as u32 >= field.order()) {
            return Err(GrsError::BadMultiplier);
        }
        let f = &**field;
        let mut g = Matrix::zeros(field, k, n);
        for (j, p) in points.iter().enumerate() {
            match *p {
                EvalPoint::Finite(a) => {
                    for i in 0..k {
                        g.set(i, j, f.mul(eta[j], f.pow(a, i as u64)));
                    }
                }
                EvalPoint::Infinity => g.set(k - 1, j, eta[j]),
            }
        }
        if opts.systematic {
            g = g.rref().matrix;
        }
        let space = Subspace::from_matrix(&g);
        if space.dim() != k {
            return Err(GrsError::Invalid("generator is rank deficient".into()));
        }
        let dual = if points.iter().all(|p| matches!(p, EvalPoint::Finite(a) if *a != 0)) {
            let a: Vec<u16> = points.iter().map(|p| p.finite().unwrap()).collect();
            Some(
                (0..n)
                    .map(|j| {
                        let prod = (0..n).filter(|&i| i != j).fold(1, |acc, i| f.mul(acc, f.sub(a[j], a[i])));
                        f.inv(f.mul(eta[j], prod)).expect("distinct points")
                    })
                    .collect(),
            )
        } else {
            None
        };
        if opts.decoder == GrsDecoder::BerlekampMassey && dual.is_none() {
            return Err(GrsError::Invalid("Berlekamp-Massey needs nonzero finite evaluation points".into()));
        }
        Ok(GrsCode { field: field.clone(), n, k, points, eta, generator: g, space, systematic: opts.systematic, decoder: opts.decoder, dual })
    }

    pub fn from_descriptor(field: &FieldRef, desc: &GrsDescriptor) -> Result<Self, GrsError> {
        if desc.q != field.order() || desc.n != desc.k + desc.d - 1 {
            return Err(GrsError::Invalid("descriptor does not match the field or n = k + d - 1".into()));
        }
        let opts = GrsOptions { points: Some(desc.a.clone()), multipliers: Some(desc.eta.clone()), systematic: desc.systematic, decoder: GrsDecoder::Auto };
        Self::with_options(field, desc.k, desc.d, opts)
    }

    pub fn descriptor(&self) -> GrsDescriptor {
        GrsDescriptor { q: self.field.order(), n: self.n, k: self.k, d: self.d(), a: self.points.clone(), eta: self.eta.clone(), systematic: self.systematic }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn points(&self) -> &[EvalPoint] {
        &self.points
    }

    pub fn multipliers(&self) -> &[u16] {
        &self.eta
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// The code as a subspace of `F_q^n`.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    /// Decoder actually used for errors.
    pub fn decoder(&self) -> GrsDecoder {
        match self.decoder {
            GrsDecoder::Auto if self.dual.is_some() => GrsDecoder::BerlekampMassey,
            GrsDecoder::Auto => GrsDecoder::Welch,
            other => other,
        }
    }

    pub fn encode(&self, msg: &[u16]) -> Result<Vec<u16>, LinalgError> {
        if let Some(&v) = msg.iter().find(|&&v| v as u32 >= self.field.order()) {
            return Err(LinalgError::NotInField(v));
        }
        self.generator.vec_mul(msg)
    }

    pub fn contains(&self, word: &[u16]) -> bool {
        self.space.contains_vector(word).unwrap_or(false)
    }

    /// Codeword symbol at position `j` for the polynomial `f`.
    pub(crate) fn symbol(&self, f: &Poly, j: usize) -> u16 {
        let v = match self.points[j] {
            EvalPoint::Finite(a) => f.eval(a),
            EvalPoint::Infinity => f.coeff(self.k - 1),
        };
        self.field.mul(self.eta[j], v)
    }

    pub(crate) fn evaluate(&self, f: &Poly) -> Vec<u16> {
        (0..self.n).map(|j| self.symbol(f, j)).collect()
    }

    fn check_received(&self, r: &MaskedVector) -> Result<usize, DecodeFailure> {
        if r.len() != self.n {
            return Err(DecodeFailure::invalid(format!("expected length {}, got {}", self.n, r.len())));
        }
        if r.values().iter().any(|&v| v as u32 >= self.field.order()) {
            return Err(DecodeFailure::invalid("symbol outside the field"));
        }
        let mu = r.erasure_count();
        if mu > self.d() - 1 {
            return Err(DecodeFailure::TooManyErasures { erased: mu, limit: self.d() - 1 });
        }
        Ok(mu)
    }

    /// Recovers the unique codeword `c` with `2·d_H(c, r) + μ ≤ d − 1` on the
    /// unerased positions, or reports failure.
    pub fn decode(&self, received: &MaskedVector) -> Result<Vec<u16>, DecodeFailure> {
        self.check_received(received)?;
        let c = match self.decoder() {
            GrsDecoder::BerlekampMassey => bm::decode(self, received)?,
            _ => welch::decode(self, received)?,
        };
        self.verify_within_radius(&c, received)?;
        Ok(c)
    }

    /// Erasure-only decoding by interpolation on the surviving positions. Fails
    /// when the survivors are inconsistent with every codeword.
    pub fn decode_erasures(&self, received: &MaskedVector) -> Result<Vec<u16>, DecodeFailure> {
        self.check_received(received)?;
        let f = &*self.field;
        let survivors: Vec<usize> = (0..self.n).filter(|&j| !received.mask()[j]).collect();
        let y = received.values();
        let mut finite: Vec<usize> = survivors.iter().copied().filter(|&j| self.points[j] != EvalPoint::Infinity).collect();
        let inf = survivors.iter().copied().find(|&j| self.points[j] == EvalPoint::Infinity);
        let r = |j: usize| f.div(y[j], self.eta[j]).expect("nonzero multiplier");
        let poly = if finite.len() >= self.k {
            finite.truncate(self.k);
            let pts: Vec<(u16, u16)> = finite.iter().map(|&j| (self.points[j].finite().unwrap(), r(j))).collect();
            Poly::lagrange_interpolate(&self.field, &pts).map_err(|e| DecodeFailure::invalid(e.to_string()))?
        } else {
            let j_inf = inf.expect("k survivors exist");
            let lead = r(j_inf);
            let top = Poly::monomial(&self.field, lead, self.k - 1);
            let pts: Vec<(u16, u16)> = finite
                .iter()
                .map(|&j| {
                    let a = self.points[j].finite().unwrap();
                    (a, f.sub(r(j), top.eval(a)))
                })
                .collect();
            let low = Poly::lagrange_interpolate(&self.field, &pts).map_err(|e| DecodeFailure::invalid(e.to_string()))?;
            low.add(&top).expect("same field")
        };
        let c = self.evaluate(&poly);
        if survivors.iter().any(|&j| c[j] != y[j]) {
            return Err(DecodeFailure::BeyondRadius);
        }
        Ok(c)
    }

    fn verify_within_radius(&self, c: &[u16], r: &MaskedVector) -> Result<(), DecodeFailure> {
        let mu = r.erasure_count();
        let errs = (0..self.n).filter(|&j| !r.mask()[j] && c[j] != r.values()[j]).count();
        if 2 * errs + mu > self.d() - 1 || !self.contains(c) {
            return Err(DecodeFailure::BeyondRadius);
        }
        Ok(())
    }

    pub(crate) fn dual_multipliers(&self) -> Option<&[u16]> {
        self.dual.as_deref()
    }
}

impl fmt::Debug for GrsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrsCode[{}, {}, {}] over GF({})", self.n, self.k, self.d(), self.field.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn weight(v: &[u16]) -> usize {
        v.iter().filter(|&&x| x != 0).count()
    }

    fn all_messages(q: u32, k: usize) -> impl Iterator<Item = Vec<u16>> {
        (0..(q as u64).pow(k as u32)).map(move |mut i| {
            (0..k)
                .map(|_| {
                    let d = (i % q as u64) as u16;
                    i /= q as u64;
                    d
                })
                .collect()
        })
    }

    #[test]
    fn minimum_distance_is_exact() {
        for (q, k, d) in [(5u32, 4usize, 3usize), (7, 3, 4), (8, 6, 3), (4, 2, 3), (5, 2, 5)] {
            let f = Field::with_order(q).unwrap();
            let c = GrsCode::new(&f, k, d).unwrap();
            let min = all_messages(q, k).filter(|m| m.iter().any(|&x| x != 0)).map(|m| weight(&c.encode(&m).unwrap())).min().unwrap();
            assert_eq!(min, d, "GRS[{}, {k}] over GF({q})", c.n());
        }
    }

    #[test]
    fn d_one_columns_are_invertible() {
        let f = Field::new(7, 1).unwrap();
        let c = GrsCode::new(&f, 4, 1).unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(c.generator().rank(), 4);
    }

    #[test]
    fn field_too_small() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(GrsCode::new(&f, 4, 4).unwrap_err(), GrsError::FieldTooSmall { n: 7, q: 5 });
        let c = GrsCode::new(&f, 4, 3).unwrap();
        assert_eq!(c.points().last(), Some(&EvalPoint::Infinity));
        assert_eq!(c.decoder(), GrsDecoder::Welch);
        assert_eq!(GrsCode::new(&f, 2, 3).unwrap().decoder(), GrsDecoder::BerlekampMassey);
    }

    #[test]
    fn encode_is_linear() {
        let f = Field::new(2, 3).unwrap();
        let c = GrsCode::new(&f, 6, 3).unwrap();
        assert!(c.encode(&[0; 6]).unwrap().iter().all(|&x| x == 0));
        let e2 = [0, 1, 0, 0, 0, 0];
        assert_eq!(c.encode(&e2).unwrap(), c.generator().row(1));
        let a = [1, 2, 3, 4, 5, 6];
        let b = [7, 0, 1, 1, 2, 3];
        let s: Vec<u16> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect();
        let ca = c.encode(&a).unwrap();
        let cb = c.encode(&b).unwrap();
        let sum: Vec<u16> = ca.iter().zip(&cb).map(|(&x, &y)| f.add(x, y)).collect();
        assert_eq!(c.encode(&s).unwrap(), sum);
    }

    #[test]
    fn systematic_generator_spans_same_code() {
        let f = Field::new(11, 1).unwrap();
        let plain = GrsCode::new(&f, 5, 3).unwrap();
        let sys = GrsCode::with_options(&f, 5, 3, GrsOptions { systematic: true, ..Default::default() }).unwrap();
        assert_eq!(plain.space(), sys.space());
        let id = Matrix::identity(&f, 5);
        assert_eq!(sys.generator().select_columns(&[0, 1, 2, 3, 4]), id);
    }

    #[test]
    fn erasures_up_to_d_minus_one() {
        let f = Field::new(5, 1).unwrap();
        let c = GrsCode::new(&f, 4, 3).unwrap();
        for m in all_messages(5, 4).step_by(7) {
            let cw = c.encode(&m).unwrap();
            for a in 0..6 {
                for b in a + 1..6 {
                    let r = MaskedVector::with_erasures(cw.clone(), &[a, b]).unwrap();
                    assert_eq!(c.decode_erasures(&r).unwrap(), cw);
                    assert_eq!(c.decode(&r).unwrap(), cw);
                }
            }
        }
    }

    #[test]
    fn too_many_erasures_rejected() {
        let f = Field::new(5, 1).unwrap();
        let c = GrsCode::new(&f, 4, 3).unwrap();
        let r = MaskedVector::with_erasures(vec![0; 6], &[0, 1, 2]).unwrap();
        assert_eq!(c.decode(&r).unwrap_err(), DecodeFailure::TooManyErasures { erased: 3, limit: 2 });
    }

    #[test]
    fn punctured_codewords_have_unique_preimages() {
        let f = Field::new(5, 1).unwrap();
        let c = GrsCode::new(&f, 3, 3).unwrap();
        let words: Vec<Vec<u16>> = all_messages(5, 3).map(|m| c.encode(&m).unwrap()).collect();
        for a in 0..c.n() {
            for b in a..c.n() {
                let mut seen = std::collections::HashSet::new();
                for w in &words {
                    let p: Vec<u16> = w.iter().enumerate().filter(|(j, _)| *j != a && *j != b).map(|(_, &x)| x).collect();
                    assert!(seen.insert(p));
                }
            }
        }
    }

    #[test]
    fn descriptor_round_trip_json() {
        let f = Field::new(5, 1).unwrap();
        let c = GrsCode::new(&f, 4, 3).unwrap();
        let json = serde_json::to_string(&c.descriptor()).unwrap();
        assert!(json.contains("\"inf\""));
        let back: GrsDescriptor = serde_json::from_str(&json).unwrap();
        let c2 = GrsCode::from_descriptor(&f, &back).unwrap();
        assert_eq!(c2.generator(), c.generator());
    }

    #[test]
    fn algebraic_decoders_agree_with_codebook_scan() {
        let mut seed = 99u64;
        let mut next = move |m: u64| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % m
        };
        for (q, k, d, dec) in [
            (5u32, 4usize, 3usize, GrsDecoder::Welch),
            (7, 2, 5, GrsDecoder::BerlekampMassey),
            (7, 2, 5, GrsDecoder::Welch),
            (8, 3, 5, GrsDecoder::BerlekampMassey),
            (5, 2, 5, GrsDecoder::Welch),
        ] {
            let f = Field::with_order(q).unwrap();
            let code = GrsCode::with_options(&f, k, d, GrsOptions { decoder: dec, ..Default::default() }).unwrap();
            for _ in 0..400 {
                let msg: Vec<u16> = (0..k).map(|_| next(q as u64) as u16).collect();
                let mut w = code.encode(&msg).unwrap();
                let flips = next(d as u64) as usize;
                for _ in 0..flips {
                    let j = next(code.n() as u64) as usize;
                    w[j] = next(q as u64) as u16;
                }
                let mu = next(d as u64) as usize;
                let mut erased = Vec::new();
                while erased.len() < mu {
                    let j = next(code.n() as u64) as usize;
                    if !erased.contains(&j) {
                        erased.push(j);
                    }
                }
                let r = MaskedVector::with_erasures(w, &erased).unwrap();
                assert_eq!(code.decode(&r), reference::decode(&code, &r), "{code:?} {dec:?} {r:?}");
            }
        }
    }
}
