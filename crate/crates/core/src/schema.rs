//! Serialized forms of subspaces, masked subspaces and codebooks.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::failure::DecodeFailure;
use crate::gf::FieldRef;
use crate::linalg::{LinalgError, MaskedSubspace, MaskedVector, Subspace};

/// Version stamped into every report.
pub const SCHEMA_VERSION: u32 = 1;

pub fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn check_field(field: &FieldRef, q: u32) -> Result<(), LinalgError> {
    if field.order() != q {
        return Err(LinalgError::ContextMismatch);
    }
    Ok(())
}

/// A subspace as the rows of its reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceRecord {
    pub n: usize,
    pub q: u32,
    pub rows: Vec<Vec<u16>>,
}

impl SubspaceRecord {
    pub fn from_subspace(v: &Subspace) -> Self {
        SubspaceRecord { n: v.ambient_dim(), q: v.field().order(), rows: v.basis_rows() }
    }

    pub fn to_subspace(&self, field: &FieldRef) -> Result<Subspace, LinalgError> {
        check_field(field, self.q)?;
        Subspace::from_rows(field, self.n, &self.rows)
    }
}

impl From<&Subspace> for SubspaceRecord {
    fn from(v: &Subspace) -> Self {
        SubspaceRecord::from_subspace(v)
    }
}

/// Received vectors with `null` in erased positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskedRecord {
    pub n: usize,
    pub q: u32,
    pub rows: Vec<Vec<Option<u16>>>,
}

impl MaskedRecord {
    pub fn from_vectors(field: &FieldRef, n: usize, vectors: &[MaskedVector]) -> Self {
        let rows = vectors
            .iter()
            .map(|v| v.values().iter().zip(v.mask()).map(|(&x, &m)| (!m).then_some(x)).collect())
            .collect();
        MaskedRecord { n, q: field.order(), rows }
    }

    pub fn from_masked(v: &MaskedSubspace) -> Self {
        Self::from_vectors(v.space().field(), v.len(), &v.basis_vectors())
    }

    pub fn to_vectors(&self, field: &FieldRef) -> Result<Vec<MaskedVector>, LinalgError> {
        check_field(field, self.q)?;
        self.rows
            .iter()
            .map(|r| {
                if r.len() != self.n {
                    return Err(LinalgError::DimensionMismatch { expected: self.n, found: r.len() });
                }
                if let Some(&x) = r.iter().flatten().find(|&&x| x as u32 >= field.order()) {
                    return Err(LinalgError::NotInField(x));
                }
                let values = r.iter().map(|x| x.unwrap_or(0)).collect();
                MaskedVector::new(values, r.iter().map(Option::is_none).collect())
            })
            .collect()
    }

    /// A record with no rows carries no mask; it is the zero space with nothing erased.
    pub fn to_masked(&self, field: &FieldRef) -> Result<MaskedSubspace, LinalgError> {
        let vectors = self.to_vectors(field)?;
        MaskedSubspace::from_vectors(field, self.n, &vectors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodebookRecord {
    pub schema_version: u32,
    pub q: u32,
    pub ambient_dim: usize,
    pub dimension: usize,
    pub size: usize,
    pub codewords: Vec<Vec<Vec<u16>>>,
}

impl CodebookRecord {
    pub fn new(field: &FieldRef, ambient_dim: usize, dimension: usize, words: &[Subspace]) -> Self {
        CodebookRecord {
            schema_version: SCHEMA_VERSION,
            q: field.order(),
            ambient_dim,
            dimension,
            size: words.len(),
            codewords: words.iter().map(Subspace::basis_rows).collect(),
        }
    }
}

/// Serialized decoder verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub ok: bool,
    pub decoded: Option<SubspaceRecord>,
    pub failure_stage: Option<crate::hybrid::FailureStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<DecodeFailure>,
    pub ground_truth_match: bool,
}
