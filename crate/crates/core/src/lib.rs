//! Telescopic relative entropy for finite-dimensional quantum states.
//!
//! `S_a(ρ||σ) = S(ρ || aρ + (1−a)σ) / (−log a)` is a bounded, normalized
//! relative entropy with values in `[0, 1]`. This crate computes it together
//! with its `a → 0` and `a → 1` limits, the closed form for pure states,
//! telescopic relative Rényi entropies, and a randomized verifier for the
//! inequalities these quantities satisfy.
//!
//! Natural logarithms are used throughout.

// `!(x >= lo)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod matfun;
pub mod oracle;
pub mod renyi;
pub mod statefile;
pub mod states;
pub mod tre;
pub mod verify;

pub use error::{Error, Result};
pub use matfun::{HermitianMatrix, RankTolerance, Tolerances};
pub use states::{DensityMatrix, SeededSampler};
pub use tre::{relative_entropy, telescopic_relative_entropy, EntropyValue};
