//! Component groups of real algebraic groups.
//!
//! A connected real algebraic group is described here by the lattice `Λ ≅ ℤⁿ`
//! in the Lie algebra of `T·Z`, the integral involution `σ` induced by complex
//! conjugation, and the σ-stable coroot lattice `Q∨ ⊆ Λ`. From that data
//!
//! ```text
//! π₀ G(ℝ) ≅ Λ₊ / (2Λ̃₊ + Q∨₊)
//! ```
//!
//! where `Λ₊` is the σ-fixed sublattice and `Λ̃₊` the image of `λ ↦ ½(λ + σλ)`.
//! The component of the coset of `λ ∈ Λ₊` contains `Exp(iλ/2)`.
//!
//! Modules:
//! - [`linalg`]: exact integer matrices, Hermite/Smith forms, lattice algebra.
//! - [`involution`]: eigenlattices, projection lattices, torus classification.
//! - [`component`]: the component-group formula and `H¹(ℝ, iΛ/iQ∨)`.
//! - [`cohomology`]: brute-force `H¹` of finite σ-modules (oracle).
//! - [`elliptic`]: real elliptic curves via discriminants, roots and periods.
//! - [`catalog`], [`spec_file`], [`selftest`]: named groups, JSON I/O and the
//!   randomized check battery used by the CLI.

// `!(x >= t)` is used on floats on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cohomology;
pub mod component;
pub mod elliptic;
mod error;
pub mod involution;
pub mod linalg;
pub mod random;
pub mod selftest;
pub mod spec_file;

pub use component::{direct_sum, h1_gamma, pi0, representative_description, H1Gamma, Pi0Result, RealGroupSpec};
pub use error::{Error, Result};
pub use involution::{classify_torus, InvolutiveLattice, TorusShape};
pub use linalg::{IntegerMatrix, LatticeBasis};
