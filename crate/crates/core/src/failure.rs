use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Why a bounded-distance decoder declined to answer.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecodeFailure {
    #[error("received word is malformed: {reason}")]
    InvalidInput { reason: String },
    #[error("{erased} erasures exceed the limit of {limit}")]
    TooManyErasures { erased: usize, limit: usize },
    #[error("received dimension {dim} exceeds the limit of {limit}")]
    ReceivedDimTooLarge { dim: usize, limit: usize },
    #[error("no codeword within the decoding radius")]
    BeyondRadius,
    #[error("subspace is not contained in the outer code")]
    NotInCode,
}

impl DecodeFailure {
    pub fn invalid(reason: impl Into<String>) -> Self {
        DecodeFailure::InvalidInput { reason: reason.into() }
    }
}
