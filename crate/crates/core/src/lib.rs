//! Spectral experiments on structured random matrix ensembles.
//!
//! The library builds palindromic symmetric Toeplitz (PST), Wigner, and
//! m-period block circulant matrices, stacks them into the recursive
//! two-block "disco" construction D_0 = A, D_k = [[D_{k-1}, B_k], [B_k,
//! D_{k-1}]], and measures empirical spectral distributions by seeded Monte
//! Carlo. Independently of the simulations, it computes the exact limiting
//! moments of the construction by enumerating labeled chord pairings under
//! a crossing rule, in rational arithmetic throughout. The two routes
//! cross-validate each other, down to an exact integer counterexample to
//! the moment-sandwich conjecture for the depth-1 construction.
//!
//! The `disco` binary drives the experiments and writes CSV or JSON
//! artifacts; see the repository README for the command grammar.

// Index loops and % 2 parity tests are the clearer idiom in the matrix
// kernels; the lint suggestions obscure them.
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod disco;
pub mod eigen;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod limits;
pub mod matrix;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
