//! Lie algebras by structure constants, modules, pairings, and triples
//! `(g, k, I)` with an equivariant projection onto the ideal.

mod algebra;
mod module;
mod triple;

pub use algebra::{validate_algebra, LieAlgebraData, ValidationReport, Violation};
pub use module::{validate_module, LieModuleData, ModulePairing};
pub use triple::{Blocks, PairData, TripleData};
