//! Belkale-Kumar instances `H(g_K, l_Δ)` built from Chevalley bases, with
//! Weyl-group counts to compare against.

mod analysis;
mod instance;
mod parabolic;
mod roots;
mod weyl;

pub use analysis::{
    even_poly, kostant_table, poly_mul, poly_string, supersets_of_levi, verify_structure, BkAnalysis, BkOptions, BkReport,
    KostantTable, Poly,
};
pub use instance::{BKInstance, InstanceEcho};
pub use parabolic::ParabolicDatum;
pub use roots::{positive_roots, CartanType, RootDatum};
pub use weyl::{weyl_counts, WeylCounts, WeylGroup};
