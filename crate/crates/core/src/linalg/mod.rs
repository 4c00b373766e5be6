//! Exact sparse linear algebra over ℚ: kernels, subspace arithmetic,
//! subquotients and the maps they induce.

mod echelon;
mod sparse;
mod subquotient;
mod subspace;

pub use echelon::{
    dense_threshold, kernel_dense, kernel_of_rows, kernel_sparse, relations, rref_rows, set_dense_threshold,
    Echelon, SpanSolver,
};
pub use sparse::{RationalMatrix, SparseVec};
pub use subquotient::{induced_map, induced_map_with, SubquotientHandle};
pub use subspace::{SerializedSubspace, SubspaceHandle};

/// Canonical basis of `{v : A v = 0}`.
pub fn kernel_basis(a: &RationalMatrix) -> SubspaceHandle {
    SubspaceHandle::kernel(a)
}

/// Rank of a matrix.
pub fn rank(a: &RationalMatrix) -> usize {
    rref_rows(a.columns().iter()).len()
}

/// Solves `A x = b`, returning one solution if any exists.
pub fn solve(a: &RationalMatrix, b: &SparseVec) -> Option<SparseVec> {
    SpanSolver::new(a.columns().iter()).solve(b)
}
