//! Spin-chain dynamics under quantum superpositions of disorder.
//!
//! An ancilla in an equal superposition of `N` basis states selects one of
//! `N` disorder profiles for a spin chain. After joint evolution the ancilla
//! is postselected back onto its initial state, which leaves the chain in an
//! interference of the `N` disordered evolutions. This crate simulates that
//! protocol for two models:
//!
//! * [`liom`]: a deep-localized l-bit model with exponentially decaying
//!   two-body couplings, diagonal in the product basis;
//! * [`xxz`]: the random-field XXZ chain, evolved by exact diagonalization.
//!
//! [`superpose`] implements the protocol (plus an independent ancilla-space
//! oracle), [`observables`] the entropies, imbalance and saturation analysis,
//! and [`ensemble`] reproducible parallel disorder averages. [`cli`] wires
//! the presets and data export used by the `mbl-superpose` binary.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod hilbert;
pub mod liom;
pub mod observables;
pub mod propagator;
pub mod superpose;
pub mod xxz;

pub use error::{Error, Result};
pub use hilbert::{StateVector, C64};
