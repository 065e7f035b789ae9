//! Constant-dimension subspace codes usable as the inner code of a hybrid code.

use num_bigint::BigUint;
use rand::{Rng, RngCore};
use thiserror::Error;

use crate::bounds::{gaussian_coeff, log_q};
use crate::failure::DecodeFailure;
use crate::gf::{FieldError, FieldRef};
use crate::kk::KkCode;
use crate::linalg::{enumerate_subspaces, LinalgError, Matrix, Subspace};

/// Codebooks are only materialized up to this many codewords.
pub const CODEBOOK_LIMIT: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    Invalid(String),
    #[error("codebook of {size} words exceeds the limit of {limit}")]
    ScaleGuard { size: String, limit: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A set of `ℓ`-dimensional subspaces of `F_q^N` with a bounded-distance decoder
/// correcting `D − 1` dimension errors.
pub trait SubspaceCode: Send + Sync {
    fn field(&self) -> &FieldRef;
    fn ambient_dim(&self) -> usize;
    fn dimension(&self) -> usize;
    /// `D`: the code corrects any `D − 1` combined losses and gains.
    fn correction_param(&self) -> usize;
    fn size(&self) -> BigUint;
    /// Returns the codeword `V` with `D(V, received) ≤ D − 1`, if any.
    fn decode(&self, received: &Subspace) -> Result<Subspace, DecodeFailure>;
    fn random_codeword(&self, rng: &mut dyn RngCore) -> Subspace;
    fn codewords(&self) -> Result<Vec<Subspace>, CodeError>;

    fn log_size(&self) -> f64 {
        log_q(&self.size(), self.field().order() as u64)
    }
}

/// The whole Grassmannian `P(F_q^N, ℓ)`: every subspace is a codeword and `D = 1`.
#[derive(Debug, Clone)]
pub struct GrassmannCode {
    field: FieldRef,
    n: usize,
    ell: usize,
}

impl GrassmannCode {
    pub fn new(field: &FieldRef, n: usize, ell: usize) -> Result<Self, CodeError> {
        if ell == 0 || ell > n {
            return Err(CodeError::Invalid(format!("need 1 <= l <= N, got l={ell}, N={n}")));
        }
        Ok(GrassmannCode { field: field.clone(), n, ell })
    }
}

/// Uniform full-rank `rows × cols` matrix by rejection.
pub(crate) fn random_full_rank(field: &FieldRef, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Matrix {
    let q = field.order();
    loop {
        let data: Vec<u16> = (0..rows * cols).map(|_| rng.random_range(0..q) as u16).collect();
        let m = Matrix::from_flat(field, rows, cols, data).expect("sizes agree");
        if m.rank() == rows {
            return m;
        }
    }
}

impl SubspaceCode for GrassmannCode {
    fn field(&self) -> &FieldRef {
        &self.field
    }

    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn dimension(&self) -> usize {
        self.ell
    }

    fn correction_param(&self) -> usize {
        1
    }

    fn size(&self) -> BigUint {
        gaussian_coeff(self.n as u64, self.ell as u64, self.field.order() as u64)
    }

    fn decode(&self, received: &Subspace) -> Result<Subspace, DecodeFailure> {
        if received.ambient_dim() != self.n {
            return Err(DecodeFailure::invalid("ambient dimension mismatch"));
        }
        if received.dim() == self.ell {
            Ok(received.clone())
        } else {
            Err(DecodeFailure::BeyondRadius)
        }
    }

    fn random_codeword(&self, rng: &mut dyn RngCore) -> Subspace {
        Subspace::from_matrix(&random_full_rank(&self.field, self.ell, self.n, rng))
    }

    fn codewords(&self) -> Result<Vec<Subspace>, CodeError> {
        let size = self.size();
        if size > BigUint::from(CODEBOOK_LIMIT) {
            return Err(CodeError::ScaleGuard { size: size.to_string(), limit: CODEBOOK_LIMIT });
        }
        Ok(enumerate_subspaces(&self.field, self.n, self.ell)?.collect())
    }
}

/// Inner codes supported by the hybrid construction.
#[derive(Debug, Clone)]
pub enum InnerCode {
    Kk(KkCode),
    Grassmann(GrassmannCode),
}

impl From<KkCode> for InnerCode {
    fn from(c: KkCode) -> Self {
        InnerCode::Kk(c)
    }
}

impl From<GrassmannCode> for InnerCode {
    fn from(c: GrassmannCode) -> Self {
        InnerCode::Grassmann(c)
    }
}

impl InnerCode {
    fn inner(&self) -> &dyn SubspaceCode {
        match self {
            InnerCode::Kk(c) => c,
            InnerCode::Grassmann(c) => c,
        }
    }

    pub fn as_kk(&self) -> Option<&KkCode> {
        match self {
            InnerCode::Kk(c) => Some(c),
            InnerCode::Grassmann(_) => None,
        }
    }
}

impl SubspaceCode for InnerCode {
    fn field(&self) -> &FieldRef {
        self.inner().field()
    }

    fn ambient_dim(&self) -> usize {
        self.inner().ambient_dim()
    }

    fn dimension(&self) -> usize {
        self.inner().dimension()
    }

    fn correction_param(&self) -> usize {
        self.inner().correction_param()
    }

    fn size(&self) -> BigUint {
        self.inner().size()
    }

    fn decode(&self, received: &Subspace) -> Result<Subspace, DecodeFailure> {
        self.inner().decode(received)
    }

    fn random_codeword(&self, rng: &mut dyn RngCore) -> Subspace {
        self.inner().random_codeword(rng)
    }

    fn codewords(&self) -> Result<Vec<Subspace>, CodeError> {
        self.inner().codewords()
    }
}
