//! Numerical laboratory for second moments of Dirichlet polynomials built
//! from automorphic coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeffs`]: Satake data, local and global coefficients, Rankin–Selberg
//!   squares, the `Delta` and `sym^2 Delta` corpora, and coefficient audits.
//! * [`dirichlet`]: Dirichlet polynomials, multi-point evaluation and
//!   quadrature of `|P(it)|^2`.
//! * [`ramare`]: the exact factorisation of a Dirichlet polynomial through
//!   Ramaré's identity, with coefficient-level reassembly.
//! * [`halasz`]: pretentious distance to `n^{it}` and its minimiser.
//! * [`moments`]: second-moment experiments, excision and large-value census.
//! * [`mean_sums`]: smoothed partial sums of `1 boxplus pi` and their main term.
//! * [`cache`]: plain-text persistence of coefficient tables.

pub mod cache;
pub mod coeffs;
pub mod dirichlet;
pub mod error;
pub mod halasz;
pub mod mean_sums;
pub mod moments;
pub mod primes;
pub mod ramare;
pub mod rng;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
