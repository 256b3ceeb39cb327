//! Generalized Hilbert operators `H_{μ,α}` on Hardy spaces: measures on
//! `[0,1)`, Hankel and integral actions, norm estimators and growth probes.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fft;
pub mod fit;
pub mod measures;
pub mod operators;
pub mod probes;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
