//! MPO symmetry operators: tensors built from a pair of representations,
//! dense assembly for small chains, transfer-matrix Hilbert-Schmidt inner
//! products for long ones, and the fusion, dagger and MPS-symmetry checks.

mod checks;
mod mps;
mod tensor;
mod transfer;

pub use checks::{check_dagger_dual, check_fusion, check_fusion_channels, DaggerReport, FusionReport};
pub use mps::{check_mps_symmetric, mps_overlap, MpsSymmetryCheck, MpsTensor};
pub use tensor::{
    assemble_dense, assemble_dense_capped, build_symmetry_tensor, dense_relative_distance,
    hs_inner, hs_norm_sq, hs_relative_distance, MpoOperator, MpoTensor,
};

use crate::error::Result;

/// Tensor of the operator product `O1 O2`, bonds multiplied row-major.
pub fn product_tensor(t1: &MpoTensor, t2: &MpoTensor) -> Result<MpoTensor> {
    t1.product(t2)
}
