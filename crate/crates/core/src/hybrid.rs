//! Hybrid codes: a subspace code lifted into a GRS code through `v ↦ vAG`.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::failure::DecodeFailure;
use crate::grs::{GrsCode, GrsError, GrsOptions};
use crate::linalg::{LinalgError, MaskedSubspace, MaskedVector, Matrix, Subspace};
use crate::subspace_code::{CodeError, InnerCode, SubspaceCode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HybridError {
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("basis change must be an invertible {0}x{0} matrix")]
    BadBasisChange(usize),
    #[error("subspace is not contained in the outer code")]
    NotInCode,
}

/// Decoder pipeline stage at which decoding stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureStage {
    Intersection,
    Rs,
    Unlift,
    Inner,
}

impl FailureStage {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureStage::Intersection => "intersection",
            FailureStage::Rs => "rs",
            FailureStage::Unlift => "unlift",
            FailureStage::Inner => "inner",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{} stage: {failure}", stage.as_str())]
pub struct StageFailure {
    pub stage: FailureStage,
    pub failure: DecodeFailure,
}

fn at(stage: FailureStage) -> impl Fn(DecodeFailure) -> StageFailure {
    move |failure| StageFailure { stage, failure }
}

/// Outcome of one decoding attempt compared against what was sent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeVerdict {
    pub ok: bool,
    pub decoded: Option<Subspace>,
    pub failure_stage: Option<FailureStage>,
    pub ground_truth_match: bool,
}

impl DecodeVerdict {
    pub fn new(result: Result<Subspace, StageFailure>, truth: &Subspace) -> Self {
        match result {
            Ok(v) => DecodeVerdict { ok: true, ground_truth_match: &v == truth, decoded: Some(v), failure_stage: None },
            Err(e) => DecodeVerdict { ok: false, decoded: None, failure_stage: Some(e.stage), ground_truth_match: false },
        }
    }
}

/// `[n, ℓ, log_q M, 2D, d]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridParams {
    pub n: usize,
    pub ell: usize,
    pub log_q_size: f64,
    #[serde(serialize_with = "crate::schema::big_as_string")]
    pub size: BigUint,
    pub two_d: usize,
    pub d: usize,
}

#[derive(Debug, Clone, Default)]
pub struct HybridOptions {
    /// Basis change `A`; identity when absent.
    pub basis_change: Option<Matrix>,
    pub grs: GrsOptions,
    /// Received subspaces above this dimension are rejected by the erasure decoder.
    /// Defaults to `ℓ + D − 1`.
    pub max_received_dim: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct HybridCode {
    inner: InnerCode,
    outer: GrsCode,
    a: Matrix,
    lift: Matrix,
    info_set: Vec<usize>,
    info_inverse: Matrix,
    max_received_dim: usize,
}

impl HybridCode {
    pub fn new(inner: impl Into<InnerCode>, d: usize) -> Result<Self, HybridError> {
        Self::with_options(inner, d, HybridOptions::default())
    }

    pub fn with_options(inner: impl Into<InnerCode>, d: usize, opts: HybridOptions) -> Result<Self, HybridError> {
        let inner = inner.into();
        let field = inner.field().clone();
        let dim_w = inner.ambient_dim();
        let outer = GrsCode::with_options(&field, dim_w, d, opts.grs)?;
        let a = match opts.basis_change {
            Some(a) => {
                if a.rows() != dim_w || a.cols() != dim_w || a.rank() != dim_w || !a.field().same_field(&field) {
                    return Err(HybridError::BadBasisChange(dim_w));
                }
                a
            }
            None => Matrix::identity(&field, dim_w),
        };
        let lift = a.mul(outer.generator())?;
        let rref = lift.rref();
        let info_set = rref.pivots.clone();
        let info_inverse = lift.select_columns(&info_set).inverse()?;
        let max_received_dim = opts.max_received_dim.unwrap_or(inner.dimension() + inner.correction_param() - 1);
        Ok(HybridCode { inner, outer, a, lift, info_set, info_inverse, max_received_dim })
    }

    /// Chooses `A` so that `E_L(e_i)` is the `i`-th row of `rows`, which must be a basis of the outer code.
    pub fn with_network_basis(inner: impl Into<InnerCode>, d: usize, rows: &Matrix, grs: GrsOptions) -> Result<Self, HybridError> {
        let inner = inner.into();
        let field = inner.field().clone();
        let outer = GrsCode::with_options(&field, inner.ambient_dim(), d, grs.clone())?;
        let g = outer.generator();
        if Subspace::from_matrix(rows) != *outer.space() || rows.rows() != g.rows() {
            return Err(HybridError::NotInCode);
        }
        let info = g.rref().pivots;
        let a = rows.select_columns(&info).mul(&g.select_columns(&info).inverse()?)?;
        Self::with_options(inner, d, HybridOptions { basis_change: Some(a), grs, max_received_dim: None })
    }

    pub fn inner(&self) -> &InnerCode {
        &self.inner
    }

    pub fn outer(&self) -> &GrsCode {
        &self.outer
    }

    pub fn basis_change(&self) -> &Matrix {
        &self.a
    }

    /// `A·G`; row `i` is `E_L(e_i)`.
    pub fn lift_matrix(&self) -> &Matrix {
        &self.lift
    }

    pub fn max_received_dim(&self) -> usize {
        self.max_received_dim
    }

    pub fn n(&self) -> usize {
        self.outer.n()
    }

    pub fn ell(&self) -> usize {
        self.inner.dimension()
    }

    pub fn big_d(&self) -> usize {
        self.inner.correction_param()
    }

    pub fn d(&self) -> usize {
        self.outer.d()
    }

    pub fn params(&self) -> HybridParams {
        HybridParams {
            n: self.n(),
            ell: self.ell(),
            log_q_size: self.inner.log_size(),
            size: self.inner.size(),
            two_d: 2 * self.big_d(),
            d: self.d(),
        }
    }

    pub fn lift_vector(&self, v: &[u16]) -> Result<Vec<u16>, LinalgError> {
        self.lift.vec_mul(v)
    }

    /// `E_L(V) = {vAG : v ∈ V}`.
    pub fn lift_subspace(&self, v: &Subspace) -> Result<Subspace, LinalgError> {
        v.image(&self.lift)
    }

    /// Preimage of a codeword of the outer code.
    pub fn unlift_vector(&self, c: &[u16]) -> Result<Vec<u16>, HybridError> {
        if c.len() != self.n() || !self.outer.contains(c) {
            return Err(HybridError::NotInCode);
        }
        let info: Vec<u16> = self.info_set.iter().map(|&j| c[j]).collect();
        Ok(self.info_inverse.vec_mul(&info)?)
    }

    /// `E_L^{-1}(U)` for a subcode `U` of the outer code.
    pub fn unlift_subspace(&self, u: &Subspace) -> Result<Subspace, HybridError> {
        if u.ambient_dim() != self.n() {
            return Err(HybridError::NotInCode);
        }
        let rows = u.basis_rows().iter().map(|r| self.unlift_vector(r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::from_rows(self.inner.field(), self.inner.ambient_dim(), &rows)?)
    }

    /// Network-side codeword for an inner codeword.
    pub fn encode(&self, inner_codeword: &Subspace) -> Result<Subspace, LinalgError> {
        self.lift_subspace(inner_codeword)
    }

    pub fn codewords(&self) -> Result<Vec<Subspace>, HybridError> {
        let inner = self.inner.codewords()?;
        Ok(inner.iter().map(|v| self.lift_subspace(v)).collect::<Result<_, _>>()?)
    }

    fn unlift_for_decoder(&self, u: &Subspace) -> Result<Subspace, StageFailure> {
        self.unlift_subspace(u).map_err(|_| StageFailure { stage: FailureStage::Unlift, failure: DecodeFailure::NotInCode })
    }

    /// Decoder for dimension losses, gains and symbol erasures.
    ///
    /// Intersect the received space with the punctured outer code, fill in the
    /// erased symbols of each basis vector, map back to the inner ambient space
    /// and run the inner decoder.
    pub fn decode_dim_and_erasures(&self, received: &MaskedSubspace) -> Result<Subspace, StageFailure> {
        let stage = at(FailureStage::Intersection);
        if received.len() != self.n() || !received.space().field().same_field(self.inner.field()) {
            return Err(stage(DecodeFailure::invalid("received subspace does not match the code")));
        }
        let mu = received.erased().len();
        if mu > self.d() - 1 {
            return Err(stage(DecodeFailure::TooManyErasures { erased: mu, limit: self.d() - 1 }));
        }
        if received.dim() > self.max_received_dim {
            return Err(stage(DecodeFailure::ReceivedDimTooLarge { dim: received.dim(), limit: self.max_received_dim }));
        }
        let punctured = Subspace::from_matrix(&self.outer.generator().remove_columns(received.erased()));
        let meet = punctured.intersect(received.space()).map_err(|e| stage(DecodeFailure::invalid(e.to_string())))?;
        let meet = MaskedSubspace::from_compact(self.inner.field(), self.n(), received.erased(), &meet.basis_rows())
            .map_err(|e| stage(DecodeFailure::invalid(e.to_string())))?;
        let gammas = meet
            .basis_vectors()
            .iter()
            .map(|g| self.outer.decode_erasures(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(at(FailureStage::Rs))?;
        let u = Subspace::from_rows(self.inner.field(), self.n(), &gammas).map_err(|e| at(FailureStage::Rs)(DecodeFailure::invalid(e.to_string())))?;
        let v = self.unlift_for_decoder(&u)?;
        self.inner.decode(&v).map_err(at(FailureStage::Inner))
    }

    /// Decoder for dimension losses, symbol errors and erasures: decode every
    /// received vector in the outer code, span, map back and run the inner decoder.
    pub fn decode_dim_losses_and_symbol_errors(&self, received_basis: &[MaskedVector]) -> Result<Subspace, StageFailure> {
        let stage = at(FailureStage::Rs);
        if let Some(first) = received_basis.first() {
            if received_basis.iter().any(|v| v.mask() != first.mask()) {
                return Err(stage(DecodeFailure::invalid("received vectors carry different erasure masks")));
            }
        }
        let betas = received_basis.iter().map(|g| self.outer.decode(g)).collect::<Result<Vec<_>, _>>().map_err(&stage)?;
        let u = Subspace::from_rows(self.inner.field(), self.n(), &betas).map_err(|e| stage(DecodeFailure::invalid(e.to_string())))?;
        let v = self.unlift_for_decoder(&u)?;
        self.inner.decode(&v).map_err(at(FailureStage::Inner))
    }

    /// Exhaustive check of the hybrid-code properties over all erasure sets of
    /// size at most `d − 1`.
    pub fn check_definition(&self) -> Result<DefinitionReport, HybridError> {
        let words = self.codewords()?;
        let n = self.n();
        let mut report = DefinitionReport { codewords: words.len(), erasure_sets: 0, all_full_dimension: true, preimages_unique: true, min_projected_distance: usize::MAX };
        for set in erasure_sets(n, self.d() - 1) {
            report.erasure_sets += 1;
            let projected: Vec<MaskedSubspace> = words.iter().map(|w| w.project(&set)).collect::<Result<_, _>>()?;
            report.all_full_dimension &= projected.iter().all(|p| p.dim() == self.ell());
            let unique: std::collections::HashSet<_> = projected.iter().collect();
            report.preimages_unique &= unique.len() == projected.len();
            for (i, a) in projected.iter().enumerate() {
                for b in &projected[i + 1..] {
                    let dist = a.space().distance(b.space())?;
                    report.min_projected_distance = report.min_projected_distance.min(dist);
                }
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionReport {
    pub codewords: usize,
    pub erasure_sets: usize,
    pub all_full_dimension: bool,
    pub preimages_unique: bool,
    pub min_projected_distance: usize,
}

/// All subsets of `0..n` with at most `max` elements, smallest first.
pub fn erasure_sets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for j in start..n {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
