use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::echelon::{kernel_of_rows, rref_rows, Echelon};
use super::sparse::{RationalMatrix, SparseVec};
use crate::error::{HscError, Result};
use crate::rational::Rational;

/// A subspace of ℚ^ambient held as canonical reduced echelon rows.
///
/// Two handles compare equal exactly when they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceHandle {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_pos: HashMap<usize, usize>,
}

impl SubspaceHandle {
    fn from_canonical(ambient: usize, rows: Vec<SparseVec>) -> Self {
        let pivots: Vec<usize> = rows.iter().map(|r| r.leading().expect("zero row").0).collect();
        let pivot_pos = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        SubspaceHandle { ambient, rows, pivots, pivot_pos }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_canonical(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_canonical(ambient, (0..ambient).map(SparseVec::unit).collect())
    }

    /// Span of the given vectors.
    pub fn span<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient: usize, vectors: I) -> Self {
        let rows = rref_rows(vectors);
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|m| m < ambient)));
        Self::from_canonical(ambient, rows)
    }

    pub fn span_owned(ambient: usize, vectors: Vec<SparseVec>) -> Self {
        Self::span(ambient, vectors.iter())
    }

    /// Span of the coordinate vectors `e_i` for `i` in `idx`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Self::from_canonical(ambient, idx.into_iter().map(SparseVec::unit).collect())
    }

    /// Column span of a matrix.
    pub fn column_span(m: &RationalMatrix) -> Self {
        Self::span(m.rows(), m.columns().iter())
    }

    /// Canonical kernel of `a`.
    pub fn kernel(a: &RationalMatrix) -> Self {
        let k = kernel_of_rows(&a.row_vectors(), a.cols());
        Self::span_owned(a.cols(), k)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as the columns of an `ambient × dim` matrix.
    pub fn basis_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient, self.rows.clone())
    }

    /// Removes the component along this subspace; the result vanishes at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (i, x) in v.iter() {
            if let Some(&k) = self.pivot_pos.get(&i) {
                out = out.axpy(&-x, &self.rows[k]);
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let c = self.coords_unchecked(v);
        if self.reduce(v).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// Entries of `v` at the pivots; equals the coordinates when `v` is a member.
    pub fn coords_unchecked(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(v.iter().filter_map(|(i, x)| self.pivot_pos.get(&i).map(|&k| (k, x.clone()))))
    }

    /// The vector with the given basis coordinates.
    pub fn combine(&self, c: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, x) in c.iter() {
            out = out.axpy(x, &self.rows[k]);
        }
        out
    }

    fn check_ambient(&self, other: &SubspaceHandle) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(HscError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &SubspaceHandle) -> Result<SubspaceHandle> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut e = Echelon::new();
        for v in self.rows.iter().chain(&other.rows) {
            e.insert(v);
        }
        Ok(Self::from_canonical(self.ambient, e.into_sorted_rows()))
    }

    pub fn intersection(&self, other: &SubspaceHandle) -> Result<SubspaceHandle> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let images: Vec<SparseVec> = self.rows.iter().map(|v| other.reduce(v)).collect();
        Ok(self.sub_kernel(&images))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &SubspaceHandle) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.rows.iter().all(|v| self.contains_vector(v)))
    }

    /// `{ Σ c_k b_k : Σ c_k images[k] = 0 }` where `b_k` is the basis.
    pub fn sub_kernel(&self, images: &[SparseVec]) -> SubspaceHandle {
        assert_eq!(images.len(), self.dim());
        let nrows = images.iter().filter_map(|c| c.max_index()).max().map_or(0, |m| m + 1);
        let m = RationalMatrix::from_columns(nrows, images.to_vec());
        let rel = kernel_of_rows(&m.row_vectors(), self.dim());
        let vecs: Vec<SparseVec> = rel.iter().map(|c| self.combine(c)).collect();
        Self::span_owned(self.ambient, vecs)
    }

    /// `{ v ∈ self : f(v) = 0 }` for a linear map given by its action on vectors.
    pub fn kernel_of<F: Fn(&SparseVec) -> SparseVec>(&self, f: F) -> SubspaceHandle {
        let images: Vec<SparseVec> = self.rows.iter().map(f).collect();
        self.sub_kernel(&images)
    }

    /// `{ v ∈ self : v_i = 0 for every i with pred(i) }`.
    pub fn restrict_zero<P: Fn(usize) -> bool>(&self, pred: P) -> SubspaceHandle {
        if self.rows.iter().all(|r| r.iter().all(|(i, _)| !pred(i))) {
            return self.clone();
        }
        self.kernel_of(|v| SparseVec::from_sorted_unchecked(v.iter().filter(|(i, _)| pred(*i)).map(|(i, x)| (i, x.clone())).collect()))
    }

    /// `{ v ∈ self : f(v) ∈ target }`.
    pub fn preimage<F: Fn(&SparseVec) -> SparseVec>(&self, f: F, target: &SubspaceHandle) -> SubspaceHandle {
        self.kernel_of(|v| target.reduce(&f(v)))
    }

    /// Image of the subspace under a linear map into ℚ^codomain.
    pub fn image<F: Fn(&SparseVec) -> SparseVec>(&self, f: F, codomain: usize) -> SubspaceHandle {
        let imgs: Vec<SparseVec> = self.rows.iter().map(f).collect();
        Self::span_owned(codomain, imgs)
    }

    /// Re-canonicalizes; the representation is already canonical so this is the identity.
    pub fn canonicalize(&self) -> SubspaceHandle {
        Self::span(self.ambient, self.rows.iter())
    }

    pub fn to_serializable(&self) -> SerializedSubspace {
        SerializedSubspace {
            ambient_dim: self.ambient,
            basis: self.rows.iter().map(|r| r.iter().map(|(i, x)| (i, x.clone())).collect()).collect(),
        }
    }
}

/// Plain-data form of a subspace for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedSubspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<(usize, Rational)>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecs(ambient: usize) -> impl Strategy<Value = Vec<SparseVec>> {
        prop::collection::vec(
            prop::collection::vec(-2i64..3, ambient)
                .prop_map(|v| SparseVec::from_dense(&v.into_iter().map(Rational::from_int).collect::<Vec<_>>())),
            0..5,
        )
    }

    #[test]
    fn kernel_examples() {
        assert!(SubspaceHandle::kernel(&RationalMatrix::identity(3)).is_zero());
        assert_eq!(SubspaceHandle::kernel(&RationalMatrix::zeros(2, 2)), SubspaceHandle::full(2));
    }

    #[test]
    fn coordinate_sum_is_full() {
        let a = SubspaceHandle::coordinate(2, [0]);
        let b = SubspaceHandle::coordinate(2, [1]);
        assert_eq!(a.sum(&b).unwrap(), SubspaceHandle::full(2));
        assert!(matches!(a.sum(&SubspaceHandle::zero(3)), Err(HscError::AmbientMismatch { .. })));
    }

    proptest! {
        #[test]
        fn dimension_formula(a in vecs(4), b in vecs(4)) {
            let a = SubspaceHandle::span(4, a.iter());
            let b = SubspaceHandle::span(4, b.iter());
            let s = a.sum(&b).unwrap();
            let i = a.intersection(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(s.contains(&a).unwrap() && s.contains(&b).unwrap());
            prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
            prop_assert_eq!(a.intersection(&a).unwrap(), a.clone());
            prop_assert_eq!(a.sum(&SubspaceHandle::zero(4)).unwrap(), a.clone());
        }

        #[test]
        fn canonical_form_is_idempotent(a in vecs(5)) {
            let s = SubspaceHandle::span(5, a.iter());
            prop_assert_eq!(s.canonicalize(), s.clone());
            let shuffled: Vec<SparseVec> = a.iter().rev().map(|v| v.scale(&Rational::from_int(3))).collect();
            prop_assert_eq!(SubspaceHandle::span(5, shuffled.iter()), s);
        }

        #[test]
        fn coords_roundtrip(a in vecs(5), c in prop::collection::vec(-3i64..4, 5)) {
            let s = SubspaceHandle::span(5, a.iter());
            let coeff = SparseVec::from_dense(&c[..s.dim()].iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>());
            let v = s.combine(&coeff);
            prop_assert_eq!(s.coords(&v), Some(coeff));
        }
    }
}
