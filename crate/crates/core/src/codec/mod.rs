//! Per-level coset encoding and multistage belief-propagation decoding.

mod alt;
mod bp;
mod llr;
mod msd;

pub use alt::{AltEncoder, SpecEncoder};
pub use bp::{BpConfig, BpDecoder, BpOutput};
pub use llr::{channel_llr, LLR_MAX};
pub use msd::{decode_uncoded_level, reduce_mod, LatticeCodec, MsdOutput};
