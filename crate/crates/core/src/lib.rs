//! Numerics for subcritical Beurling functionals.
//!
//! Everything here is `no_std` + `alloc`: Hermite functions and Gauss rules,
//! exact test-function algebra, the orthant-split evaluator for
//! `K_a(f) = ∬ |f(x)| |f̂(y)| e^{a|x·y|} dx dy`, the Bargmann transform,
//! decay envelopes and the Heisenberg-group checks. IO lives elsewhere.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bargmann;
pub mod envelope;
pub mod error;
pub mod function;
pub mod functional;
pub mod heisenberg;
pub mod hermite;
pub mod linalg;
pub mod special;

mod prelude;

pub use error::{Error, Result};
pub use function::{DecayBound, DecayProfile, PolyGaussian, TestFunction};
pub use hermite::{HermiteExpansion, MultiIndex, QuadratureRule};

/// Complex scalar used for all coefficients.
pub type C64 = num_complex::Complex64;
