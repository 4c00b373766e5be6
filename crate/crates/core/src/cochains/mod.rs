//! Chevalley-Eilenberg cochains: absolute and relative complexes, the
//! differential, contraction, Lie derivative, cup product and cohomology rings.

mod cochain;
pub mod frame;
mod identities;
mod ops;
mod relative;

pub use cochain::Cochain;
pub use frame::Frame;
pub use identities::{cartan_failures, contraction_failures, square_zero_failures};
pub use ops::{cup, iota, CeOperators};
pub use relative::{cohomology, relative_basis, CohomologyRing, RelativeComplex};
pub(crate) use ops::cup_unchecked;
pub(crate) use relative::joint_theta_kernel;
