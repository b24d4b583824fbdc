//! Numerical q-series kernel.
//!
//! The crate evaluates q-Pochhammer symbols and basic hypergeometric series,
//! four families of basic hypergeometric orthogonal polynomials (Askey–Wilson,
//! continuous q-ultraspherical, little q-Laguerre and q-Laguerre), their
//! one-free-parameter connection coefficients, and checks generating-function
//! identities and orthogonality-derived integrals, series and q-integrals
//! numerically.
//!
//! Everything here is pure computation on `f64`/[`C64`] values. The crate is
//! `no_std` and only needs `alloc`; IO, parameter sampling and report files
//! live in the `qsk` companion crate.
//!
//! Module map:
//! - [`qpoch`]: q-Pochhammer symbols, q-numbers, identity and inequality checks
//! - [`bhs`]: the `r phi s` evaluator with termination detection
//! - [`polyfam`]: polynomial families, weights and norm constants
//! - [`connect`]: connection coefficients with one free parameter
//! - [`genfun`]: catalog of generating functions and their generalizations
//! - [`orthofunc`]: orthogonality functionals and the derived corollaries
//! - [`quad`]: Gauss–Legendre rules

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::many_single_char_names, clippy::too_many_arguments, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bhs;
pub mod connect;
mod error;
pub mod genfun;
pub mod orthofunc;
pub mod polyfam;
pub mod qpoch;
pub mod quad;
mod sum;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use sum::CompensatedSum;

/// Complex double used for every parameter that may leave the real line.
pub type C64 = num_complex::Complex64;

/// `re + i*im`.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real value promoted to [`C64`].
#[inline]
pub const fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}
