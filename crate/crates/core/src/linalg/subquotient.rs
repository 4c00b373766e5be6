use super::sparse::{RationalMatrix, SparseVec};
use super::subspace::SubspaceHandle;
use crate::error::{HscError, Result};

/// A quotient `top / bottom` of subspaces of a common ambient space.
///
/// Representatives of a quotient basis are the canonical basis of the
/// reduction of `top` modulo `bottom`; they lie in `top` and the coordinates
/// of a class are the entries of the reduced vector at their pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientHandle {
    top: SubspaceHandle,
    bottom: SubspaceHandle,
    reps: SubspaceHandle,
}

impl SubquotientHandle {
    pub fn new(top: SubspaceHandle, bottom: SubspaceHandle) -> Result<Self> {
        if !top.contains(&bottom)? {
            return Err(HscError::NotWellDefined("bottom is not contained in top".into()));
        }
        let reps = top.image(|v| bottom.reduce(v), top.ambient_dim());
        debug_assert_eq!(reps.dim() + bottom.dim(), top.dim());
        Ok(SubquotientHandle { top, bottom, reps })
    }

    /// The full quotient `ℚ^n / 0`.
    pub fn whole(n: usize) -> Self {
        Self::new(SubspaceHandle::full(n), SubspaceHandle::zero(n)).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.top.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn top(&self) -> &SubspaceHandle {
        &self.top
    }

    pub fn bottom(&self) -> &SubspaceHandle {
        &self.bottom
    }

    /// Representatives in `top` of the quotient basis.
    pub fn representatives(&self) -> &[SparseVec] {
        self.reps.basis()
    }

    pub fn representative(&self, c: &SparseVec) -> SparseVec {
        self.reps.combine(c)
    }

    /// Class coordinates of `v`; errors if `v ∉ top`.
    pub fn coords(&self, v: &SparseVec) -> Result<SparseVec> {
        if !self.top.contains_vector(v) {
            return Err(HscError::NotWellDefined("vector is not in the top space".into()));
        }
        Ok(self.coords_unchecked(v))
    }

    pub fn coords_unchecked(&self, v: &SparseVec) -> SparseVec {
        self.reps.coords_unchecked(&self.bottom.reduce(v))
    }

    pub fn is_zero_class(&self, v: &SparseVec) -> bool {
        self.bottom.contains_vector(v)
    }
}

/// Matrix of the map induced by `f` on subquotients.
pub fn induced_map(f: &RationalMatrix, src: &SubquotientHandle, dst: &SubquotientHandle) -> Result<RationalMatrix> {
    if f.cols() != src.ambient_dim() || f.rows() != dst.ambient_dim() {
        return Err(HscError::AmbientMismatch { left: f.cols(), right: src.ambient_dim() });
    }
    induced_map_with(|v| f.apply(v), src, dst)
}

/// As [`induced_map`] with the linear map given as a function on vectors.
pub fn induced_map_with<F: Fn(&SparseVec) -> SparseVec>(
    f: F,
    src: &SubquotientHandle,
    dst: &SubquotientHandle,
) -> Result<RationalMatrix> {
    for b in src.bottom().basis() {
        if !dst.bottom().contains_vector(&f(b)) {
            return Err(HscError::NotWellDefined("image of the source bottom leaves the target bottom".into()));
        }
    }
    for b in src.top().basis() {
        if !dst.top().contains_vector(&f(b)) {
            return Err(HscError::NotWellDefined("image of the source top leaves the target top".into()));
        }
    }
    let cols = src.representatives().iter().map(|r| dst.coords_unchecked(&f(r))).collect();
    Ok(RationalMatrix::from_columns(dst.dim(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    #[test]
    fn identity_and_zero_maps() {
        let top = SubspaceHandle::full(3);
        let bottom = SubspaceHandle::coordinate(3, [1]);
        let q = SubquotientHandle::new(top, bottom).unwrap();
        assert_eq!(q.dim(), 2);
        let id = induced_map(&RationalMatrix::identity(3), &q, &q).unwrap();
        assert_eq!(id, RationalMatrix::identity(2));
        let z = induced_map(&RationalMatrix::zeros(3, 3), &q, &q).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn doubling_map() {
        let q = SubquotientHandle::whole(1);
        let f = RationalMatrix::identity(1).scale(&Rational::from_int(2));
        assert_eq!(induced_map(&f, &q, &q).unwrap(), RationalMatrix::from_int_rows(&[vec![2]]));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let src = SubquotientHandle::new(SubspaceHandle::full(2), SubspaceHandle::coordinate(2, [0])).unwrap();
        let dst = SubquotientHandle::new(SubspaceHandle::full(2), SubspaceHandle::coordinate(2, [1])).unwrap();
        let err = induced_map(&RationalMatrix::identity(2), &src, &dst).unwrap_err();
        assert!(matches!(err, HscError::NotWellDefined(_)));
    }
}
