//! Numerical laboratory for Beurling generalized number systems.
//!
//! A generalized prime system is a nondecreasing sequence of reals `p_1 > 1`
//! (or, more generally, a measure `dΠ`); its generalized integers are the
//! formal products. The crate computes counting functions, the zeta function
//! `ζ(s) = exp(∫ x^{-s} dΠ)`, density constants, Möbius and Liouville sums,
//! and the diagnostics used to compare a system against the comparator `Π₀`
//! with `N(x) = x`.
//!
//! Measures are discretized on a uniform grid in `u = log x`, where
//! multiplicative convolution becomes a Cauchy product.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bump;
pub mod cli;
pub mod error;
pub mod grid;
pub mod harness;
pub mod quad;
pub mod semigroup;
pub mod special;
pub mod summatory;
pub mod systems;

pub use error::{GnumError, Result};
pub use grid::{conv, cumulative, exp_conv, inv_conv, log_conv, mellin, LogGridMeasure, MellinPoint};
pub use systems::{builtin, PrimeSystem, SystemSpec};
