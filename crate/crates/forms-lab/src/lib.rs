//! forms-lab: a desk-scale numerical laboratory for integer points,
//! volumes and singularity exponents of homogeneous-form inequalities.
//!
//! The crate cross-validates three views of the same geometry:
//!
//! - **Exact counting** ([`lattice`]): integer solutions of
//!   `‖F(m)‖ <= T^(d-α)` inside a dilated body `T·K`, and band counts of
//!   unimodular twists `F ∘ g`.
//! - **Monte Carlo volumes** ([`volume`], [`fit`]): sublevel-set volumes,
//!   whose growth `γ · T^n · c(T)^r · |log c(T)|^(m-1)` is fitted to
//!   recover the pair `(r, m)`; hyperplane-slice volumes and the flatness
//!   exponent built from them.
//! - **Closed forms** ([`sato`], [`divisor`]): exact Bernstein–Sato root
//!   data and log-canonical thresholds at monomial scale, and the Piltz
//!   divisor summatory function with its main-term polynomials, tied to the
//!   product-form count by an exact two-sided bracket.
//!
//! Random-twist experiments ([`twist`]) probe the almost-everywhere
//! statements with seed-pinned sampling over determinant-one matrices.
//!
//! Every randomized routine takes an explicit seed and reduces in fixed
//! order, so results are reproducible bit for bit across runs and thread
//! counts. See the `examples/` directory for one runnable walk-through per
//! capability, and the `forms-lab` binary for the batch interface.

// negated comparisons like !(x > 0.0) deliberately reject NaN inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod divisor;
pub mod domain;
pub mod error;
pub mod fit;
pub mod forms;
pub mod lattice;
pub mod rational;
pub mod sato;
pub mod twist;
pub mod volume;

pub use error::{Error, Result};
