//! Multilevel LDPC lattices built with the generalized Construction D'.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`]: sparse integer matrices, GF(2) rank, Tanner-graph distances and
//!   girth, alist I/O.
//! * [`design`]: progressive-edge-growth construction and check splitting of
//!   nested parity-check matrices.
//! * [`lattice`]: lattice specifications, syndromes, sequential encoding,
//!   membership and the brute-force codebook oracle.
//! * [`codec`]: linear-time coset encoding, coset belief propagation and
//!   multistage decoding.
//! * [`sim`]: unconstrained AWGN Monte-Carlo harness and rate design.
//! * [`bundle`]: on-disk spec bundles and key-value configuration files.

pub mod bundle;
pub mod codec;
pub mod design;
pub mod error;
pub mod gf2;
pub mod kv;
pub mod lattice;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
