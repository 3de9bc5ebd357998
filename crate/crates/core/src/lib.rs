//! Exact-arithmetic computations around the Hilbert-Mumford criterion for
//! tensor representations of `GL(V)`: weight sets and `mu`-values of sparse
//! rational tensors, the optimal destabilizing one-parameter subgroup within
//! the diagonal torus, the weighted-filtration semistability calculus for
//! decorated sheaves, and weighted-projective homogenization.
//!
//! All arithmetic is over `num::BigRational`; no floating point appears in
//! any computation or interchange format.

pub mod cli;
pub mod error;
pub mod homogenize;
pub mod kempf;
pub mod lattice;
pub mod oracles;
pub mod rat;
pub mod sheafcalc;
pub mod tensor;

pub use error::Error;
pub use rat::Rat;

pub type Result<T> = std::result::Result<T, Error>;
