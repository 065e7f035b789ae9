//! Hybrid network codes: subspace codes lifted into generalized Reed-Solomon
//! codes, correcting dimension errors together with symbol errors and erasures.
//!
//! ```
//! use hybridnc::channel::{transmit_seeded, ChannelSpec};
//! use hybridnc::{Field, HybridCode, KkCode, SubspaceCode};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let f = Field::with_order(7)?;
//! let code = HybridCode::new(KkCode::new(&f, 2, 2, 1)?, 3)?;
//! let mut rng = ChannelSpec::new(0, 0, 0, 0).rng();
//! let sent_inner = code.inner().random_codeword(&mut rng);
//! let sent = code.encode(&sent_inner)?;
//! let out = transmit_seeded(&sent, &ChannelSpec::new(1, 0, 1, 0).with_seed(9))?;
//! let decoded = code.decode_dim_losses_and_symbol_errors(&out.received_basis)?;
//! assert_eq!(decoded, sent_inner);
//! # Ok(())
//! # }
//! ```

pub mod bounds;
pub mod channel;
pub mod experiment;
pub mod failure;
pub mod gf;
pub mod grs;
pub mod hybrid;
pub mod kk;
pub mod linalg;
pub mod poly;
pub mod schema;
pub mod subspace_code;

pub use channel::{transmit, ChannelOutcome, ChannelSpec, ChannelTruth};
pub use failure::DecodeFailure;
pub use gf::{Field, FieldDescriptor, FieldElement, FieldRef};
pub use grs::{EvalPoint, GrsCode, GrsDecoder, GrsOptions};
pub use hybrid::{DecodeVerdict, FailureStage, HybridCode, HybridOptions, HybridParams};
pub use kk::{KkCode, KkDecoder};
pub use linalg::{MaskedSubspace, MaskedVector, Matrix, Subspace};
pub use subspace_code::{GrassmannCode, InnerCode, SubspaceCode};
