//! Exact Darboux transforms of block tridiagonal operators and bispectral
//! checks for matrix-valued orthogonal polynomials.
//!
//! Everything is computed over the rationals: moments of the weight
//! families, monic orthogonal polynomials and their recurrences, the block
//! Darboux factorization `L0 = alpha beta -> L = beta alpha`, and the right
//! acting differential operators `D` with `P_n D = Lambda_n P_n`.

pub mod bispec;
pub mod blockop;
pub mod error;
pub mod exact;
pub mod mop;
pub mod weights;

pub use error::{Error, Result};
