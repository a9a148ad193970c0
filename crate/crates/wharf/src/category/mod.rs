//! Multiplicity-free fusion categories: fusion rings, F-symbols, their
//! validation, and compilation into weak Hopf algebras.

mod compile;
mod fsymbols;
mod ring;

pub use compile::{compile, counit_closed_form, enumerate_basis, DiagramBasisElement};
pub use fsymbols::{validate_category, CategoryValidation, FKey, FSymbols};
pub use ring::FusionRing;
pub(crate) use ring::perron_dims;
