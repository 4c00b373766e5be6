//! The Hochschild-Serre spectral sequence of a triple `(g, k, I)`.

mod bicomplex;
mod filtration;
mod hq;
mod maps;
mod pages;
mod products;
mod sequence;

pub use bicomplex::{DoubleComplex, Target, ValueLevel};
pub use filtration::FilteredComplexState;
pub use hq::HqModule;
pub use pages::{LimitCell, Page, PageCell, PageState, PageSummary};
pub use products::{TensorDecomposition, TensorReport};
pub use sequence::{CheckOptions, CheckOutcome, HochschildSerre, VerificationReport};

pub(crate) use crate::sample::sample_indices;
