//! Numerical toolkit for weak Hopf algebra symmetries of matrix product
//! operators: axiom verification, fusion-category compilation, MPO fusion
//! checks, renormalization-fixed-point density operators and anomaly
//! diagnostics.

// `!(x <= tol)` is deliberate throughout: NaN residuals must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anomaly;
pub mod category;
pub mod error;
pub mod fib;
pub mod formats;
pub mod mpo;
pub mod numerics;
pub mod par;
pub mod rfp;
pub mod symmetry;
pub mod wha;

pub use error::{Error, Result};
