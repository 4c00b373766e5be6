//! Exact relative Lie algebra cohomology and the relative Hochschild-Serre
//! spectral sequence over ℚ, with Belkale-Kumar instances built from root
//! systems.
//!
//! Layers, bottom up:
//! - [`linalg`]: sparse exact linear algebra, subspaces and subquotients;
//! - [`lie`]: Lie algebras by structure constants, modules, pairings and
//!   the equivariant projection onto an ideal;
//! - [`cochains`]: Chevalley-Eilenberg complexes, relative subcomplexes,
//!   cup products and cohomology rings;
//! - [`spectral`]: filtration, pages, differentials, edge maps, products and
//!   the tensor decomposition of the second page;
//! - [`bk`]: root data, Weyl groups and the deformed product on `H*(G/P)`.

pub mod bk;
pub mod cochains;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod rational;
mod sample;
pub mod spectral;

pub use error::{HscError, Result};
pub use rational::Rational;
