//! Matrices and subspaces over `F_q`.

mod enumerate;
mod masked;
mod matrix;
mod subspace;

use thiserror::Error;

pub use enumerate::{enumerate_subspaces, SubspaceIter, ENUMERATION_LIMIT};
pub use masked::{MaskedSubspace, MaskedVector};
pub use matrix::{Matrix, Rref};
pub use subspace::{puncture_codebook, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("entry {0} is not a field element")]
    NotInField(u16),
    #[error("erasure masks differ")]
    MaskMismatch,
    #[error("coordinate {0} is already erased")]
    AlreadyErased(usize),
    #[error("coordinate {index} out of range for length {len}")]
    CoordinateOutOfRange { index: usize, len: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration would exceed {limit} items")]
    ScaleGuard { limit: u64 },
    #[error("internal consistency check failed: {0}")]
    Internal(&'static str),
}
