//! Finite-dimensional weak Hopf *-algebras: structure tables, the axiom
//! suite, duals, representations and their decompositions.

mod axioms;
mod rep;
mod structure;
mod table;

pub use axioms::{verify_axioms, Axiom, AxiomReport, AxiomResidual};
pub use rep::{
    commutant, decompose, decompose_with_threshold, fusion_multiplicities, intertwiners,
    irreducible_components, monoidal_product, regular_star_rep, IrrepBlock, IrrepDecomposition,
    RepFlags, Representation, NULL_THRESHOLD,
};
pub use structure::{center_basis, central_idempotents, regular_rank};
pub use table::{Coeffs, WhaTable};
