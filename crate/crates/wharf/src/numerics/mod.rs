//! Dense complex linear algebra shared by every other module.

mod linalg;
mod matrix;

pub use linalg::{
    cholesky_upper, eig_spectrum, hermitian_eigen, inverse, multiset_distance, null_space,
    partial_trace, rank, singular_values, solve_least_squares, SpectrumReport, MAX_EIG_DIM,
};
pub use matrix::{
    frob_residual, kron, kron_capped, vec_max_diff, vec_norm, CMatrix, C64, DEFAULT_DENSE_CAP,
    ONE, ZERO,
};

/// Default residual tolerance, relative to the Frobenius scale of the input.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
