use std::collections::BTreeMap;

use rayon::prelude::*;

use super::cochain::Cochain;
use super::frame::Frame;
use super::ops::{cup_unchecked, CeOperators};
use crate::error::{HscError, Result};
use crate::lie::{LieModuleData, ModulePairing, PairData};
use crate::linalg::{RationalMatrix, SparseVec, SubquotientHandle, SubspaceHandle};
use crate::rational::Rational;

/// Canonical basis of `C^n(g, k; M)` inside the frame of cochains on tuples avoiding `k`.
///
/// Cochains on such tuples are exactly those killed by `i_x` for `x ∈ k`;
/// the relative space is then the joint kernel of the `θ_x`, which preserve
/// the frame because `k` is a subalgebra.
pub fn relative_basis(ops: &CeOperators, pair: &PairData, n: usize) -> (Frame, SubspaceHandle) {
    let frame = Frame::new(pair.dim(), &pair.free_indices(), n, ops.module().dim());
    let space = joint_theta_kernel(ops, &frame, &pair.k_indices, &SubspaceHandle::full(frame.len()));
    (frame, space)
}

/// `{ f ∈ within : θ_x f = 0 for all x in xs }`.
pub(crate) fn joint_theta_kernel(
    ops: &CeOperators,
    frame: &Frame,
    xs: &[usize],
    within: &SubspaceHandle,
) -> SubspaceHandle {
    if xs.is_empty() || within.is_zero() {
        return within.clone();
    }
    let len = frame.len();
    within.kernel_of(|v| {
        let f = Cochain::from_coords(frame, v);
        let mut e = Vec::new();
        for (k, &x) in xs.iter().enumerate() {
            let t = ops.theta_basis(x, &f);
            let c = t.to_coords(frame).expect("θ_x preserves the frame for x in k");
            e.extend(c.iter().map(|(i, y)| (k * len + i, y.clone())));
        }
        SparseVec::from_sorted_unchecked(e)
    })
}

/// The relative Chevalley-Eilenberg complex `C(g, k; M)` in frame coordinates.
#[derive(Clone, Debug)]
pub struct RelativeComplex {
    pair: PairData,
    ops: CeOperators,
    frames: Vec<Frame>,
    spaces: Vec<SubspaceHandle>,
    /// `d` of each canonical basis vector of degree `n`, in frame `n + 1` coordinates.
    d_images: Vec<Vec<SparseVec>>,
}

impl RelativeComplex {
    pub fn new(pair: &PairData, module: &LieModuleData) -> Result<Self> {
        let ops = CeOperators::new(&pair.algebra, module)?;
        let top = pair.free_indices().len();
        let built: Vec<(Frame, SubspaceHandle)> = (0..=top).into_par_iter().map(|n| relative_basis(&ops, pair, n)).collect();
        let (frames, spaces): (Vec<Frame>, Vec<SubspaceHandle>) = built.into_iter().unzip();
        let mut cx = RelativeComplex { pair: pair.clone(), ops, frames, spaces, d_images: Vec::new() };
        cx.d_images = (0..=top)
            .into_par_iter()
            .map(|n| cx.spaces[n].basis().iter().map(|v| cx.apply_d(n, v)).collect())
            .collect();
        Ok(cx)
    }

    pub fn pair(&self) -> &PairData {
        &self.pair
    }

    pub fn ops(&self) -> &CeOperators {
        &self.ops
    }

    /// Largest degree with a nonzero frame: `dim g − dim k`.
    pub fn top_degree(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn frame(&self, n: usize) -> &Frame {
        &self.frames[n]
    }

    pub fn space(&self, n: usize) -> &SubspaceHandle {
        &self.spaces[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.spaces.get(n).map_or(0, |s| s.dim())
    }

    pub fn to_cochain(&self, n: usize, v: &SparseVec) -> Cochain {
        Cochain::from_coords(&self.frames[n], v)
    }

    pub fn from_cochain(&self, c: &Cochain) -> Option<SparseVec> {
        self.frames.get(c.degree()).and_then(|f| c.to_coords(f))
    }

    /// `d` of a frame vector, projected onto the degree `n + 1` frame.
    pub fn apply_d(&self, n: usize, v: &SparseVec) -> SparseVec {
        if n >= self.top_degree() {
            return SparseVec::new();
        }
        let dc = self.ops.differential(&self.to_cochain(n, v));
        dc.to_coords_projected(&self.frames[n + 1])
    }

    /// `d` as a cochain on all tuples (no projection).
    pub fn apply_d_full(&self, n: usize, v: &SparseVec) -> Cochain {
        self.ops.differential(&self.to_cochain(n, v))
    }

    /// Images of the canonical basis of degree `n` under `d`.
    pub fn d_images(&self, n: usize) -> &[SparseVec] {
        &self.d_images[n]
    }

    /// Matrix of `d` between canonical relative bases.
    pub fn differential_matrix(&self, n: usize) -> RationalMatrix {
        let rows = self.dim(n + 1);
        if n + 1 > self.top_degree() {
            return RationalMatrix::zeros(0, self.dim(n));
        }
        let target = &self.spaces[n + 1];
        RationalMatrix::from_columns(
            rows,
            self.d_images[n].iter().map(|w| target.coords_unchecked(w)).collect(),
        )
    }

    /// Whether `d` maps each relative space into the next one, with no part on tuples meeting `k`.
    pub fn check_d_stable(&self) -> bool {
        (0..self.top_degree()).all(|n| {
            self.spaces[n].basis().iter().all(|v| {
                let full = self.apply_d_full(n, v);
                full.to_coords(&self.frames[n + 1]).is_some_and(|c| self.spaces[n + 1].contains_vector(&c))
            })
        })
    }

    pub fn cocycles(&self, n: usize) -> SubspaceHandle {
        let imgs = &self.d_images[n];
        self.spaces[n].sub_kernel(imgs)
    }

    pub fn coboundaries(&self, n: usize) -> SubspaceHandle {
        let len = self.frames[n].len();
        if n == 0 {
            return SubspaceHandle::zero(len);
        }
        SubspaceHandle::span(len, self.d_images[n - 1].iter())
    }

    pub fn cohomology_group(&self, n: usize) -> Result<SubquotientHandle> {
        let z = self.cocycles(n);
        let b = self.coboundaries(n);
        SubquotientHandle::new(z, b).map_err(|_| HscError::NotACocycle(format!("B^{n} ⊄ Z^{n}")))
    }

    /// Full cohomology computation.
    pub fn cohomology(&self) -> Result<CohomologyRing> {
        let groups: Vec<Result<SubquotientHandle>> =
            (0..=self.top_degree()).into_par_iter().map(|n| self.cohomology_group(n)).collect();
        let groups = groups.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(CohomologyRing { groups, products: None })
    }

    /// The class coordinates of a relative cocycle of degree `n`.
    pub fn class_of(&self, ring: &CohomologyRing, n: usize, v: &SparseVec) -> Result<SparseVec> {
        ring.groups[n].coords(v).map_err(|_| HscError::NotACocycle(format!("vector is not a cocycle in degree {n}")))
    }

    /// Cup product of frame vectors in degrees `p` and `q` through a pairing.
    pub fn cup_coords(&self, p: usize, a: &SparseVec, q: usize, b: &SparseVec, pairing: &ModulePairing) -> SparseVec {
        if p + q > self.top_degree() {
            return SparseVec::new();
        }
        let c = cup_unchecked(&self.to_cochain(p, a), &self.to_cochain(q, b), pairing);
        c.to_coords(&self.frames[p + q]).expect("cup of relative cochains avoids k")
    }
}

/// Cocycles, coboundaries, representatives and (optionally) cup structure constants.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    groups: Vec<SubquotientHandle>,
    products: Option<BTreeMap<(usize, usize, usize, usize), SparseVec>>,
}

impl CohomologyRing {
    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> &SubquotientHandle {
        &self.groups[n]
    }

    pub fn cocycles(&self, n: usize) -> &SubspaceHandle {
        self.groups[n].top()
    }

    pub fn coboundaries(&self, n: usize) -> &SubspaceHandle {
        self.groups[n].bottom()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.betti().iter().sum()
    }

    /// Representative cocycles (frame coordinates) of the class basis in degree `n`.
    pub fn representatives(&self, n: usize) -> &[SparseVec] {
        self.groups[n].representatives()
    }

    /// Computes cup structure constants on representatives.
    pub fn compute_products(&mut self, cx: &RelativeComplex, pairing: &ModulePairing) -> Result<()> {
        if pairing.src1.dim() != cx.ops().module().dim()
            || pairing.src2.dim() != cx.ops().module().dim()
            || pairing.dst.dim() != cx.ops().module().dim()
        {
            return Err(HscError::PairingShape("ring pairings must map M ⊗ M → M".into()));
        }
        let top = self.top_degree();
        let keys: Vec<(usize, usize, usize, usize)> = (0..=top)
            .flat_map(|p| (0..=top - p).map(move |q| (p, q)))
            .flat_map(|(p, q)| {
                let dp = self.groups[p].dim();
                let dq = self.groups[q].dim();
                (0..dp).flat_map(move |i| (0..dq).map(move |j| (p, i, q, j)))
            })
            .collect();
        let vals: Vec<Result<((usize, usize, usize, usize), SparseVec)>> = keys
            .into_par_iter()
            .map(|(p, i, q, j)| {
                let a = &self.groups[p].representatives()[i];
                let b = &self.groups[q].representatives()[j];
                let c = cx.cup_coords(p, a, q, b, pairing);
                let coords = self.groups[p + q]
                    .coords(&c)
                    .map_err(|_| HscError::NotACocycle(format!("cup of classes in degrees {p}, {q}")))?;
                Ok(((p, i, q, j), coords))
            })
            .collect();
        self.products = Some(vals.into_iter().collect::<Result<BTreeMap<_, _>>>()?);
        Ok(())
    }

    /// `[a_i] · [b_j]` for basis classes `i ∈ H^p`, `j ∈ H^q`.
    pub fn product(&self, p: usize, i: usize, q: usize, j: usize) -> Option<&SparseVec> {
        self.products.as_ref().and_then(|m| m.get(&(p, i, q, j)))
    }

    pub fn has_products(&self) -> bool {
        self.products.is_some()
    }

    /// Product of arbitrary classes given by coordinates.
    pub fn multiply(&self, p: usize, a: &SparseVec, q: usize, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        if p + q > self.top_degree() {
            return out;
        }
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                if let Some(v) = self.product(p, i, q, j) {
                    out = out.axpy(&(x * y), v);
                }
            }
        }
        out
    }

    /// Failures of graded commutativity `[a][b] = (−1)^{pq}[b][a]` on basis classes.
    pub fn graded_commutativity_failures(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        let top = self.top_degree();
        for p in 0..=top {
            for q in 0..=top - p {
                for i in 0..self.groups[p].dim() {
                    for j in 0..self.groups[q].dim() {
                        let ab = self.product(p, i, q, j).cloned().unwrap_or_default();
                        let ba = self.product(q, j, p, i).cloned().unwrap_or_default();
                        let s = Rational::pow_neg_one(p * q);
                        if ab != ba.scale(&s) {
                            out.push((p, i, q, j));
                        }
                    }
                }
            }
        }
        out
    }

    /// Failures of associativity on basis classes.
    pub fn associativity_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let top = self.top_degree();
        for p in 0..=top {
            for q in 0..=top - p {
                for r in 0..=top - p - q {
                    for i in 0..self.groups[p].dim() {
                        for j in 0..self.groups[q].dim() {
                            for k in 0..self.groups[r].dim() {
                                let ab = self.multiply(p, &SparseVec::unit(i), q, &SparseVec::unit(j));
                                let left = self.multiply(p + q, &ab, r, &SparseVec::unit(k));
                                let bc = self.multiply(q, &SparseVec::unit(j), r, &SparseVec::unit(k));
                                let right = self.multiply(p, &SparseVec::unit(i), q + r, &bc);
                                if left != right {
                                    out.push((p, q, r));
                                }
                            }
                        }
                    }
                }
            }
        }
        out.dedup();
        out
    }

    /// Whether the class of degree 0 with coordinates `unit` acts as the identity.
    pub fn is_unit(&self, unit: &SparseVec) -> bool {
        (0..=self.top_degree()).all(|n| {
            (0..self.groups[n].dim()).all(|j| self.multiply(0, unit, n, &SparseVec::unit(j)) == SparseVec::unit(j))
        })
    }
}

/// Convenience: cohomology of a pair with coefficients, with products when a ring pairing is supplied.
pub fn cohomology(pair: &PairData, module: &LieModuleData, pairing: Option<&ModulePairing>) -> Result<(RelativeComplex, CohomologyRing)> {
    let cx = RelativeComplex::new(pair, module)?;
    let mut ring = cx.cohomology()?;
    if let Some(p) = pairing {
        ring.compute_products(&cx, p)?;
    }
    Ok((cx, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;

    #[test]
    fn sl2_relative_dims_and_betti() {
        let g = LieAlgebraData::sl2();
        let pair = PairData { algebra: g.clone(), k_indices: vec![0] };
        let (cx, ring) = cohomology(&pair, &LieModuleData::trivial(3, 1), Some(&ModulePairing::trivial(3))).unwrap();
        assert_eq!((0..=3).map(|n| cx.dim(n)).collect::<Vec<_>>(), vec![1, 0, 1, 0]);
        assert_eq!(ring.betti(), vec![1, 0, 1]);
        assert!(cx.check_d_stable());
        assert!(ring.is_unit(&SparseVec::unit(0)));
        // x ∪ x vanishes for dimension reasons.
        assert!(ring.product(2, 0, 2, 0).is_none());
    }

    #[test]
    fn sl2_absolute_betti() {
        let g = LieAlgebraData::sl2();
        let (_, ring) = cohomology(&PairData::absolute(&g), &LieModuleData::trivial(3, 1), None).unwrap();
        assert_eq!(ring.betti(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn abelian_betti_are_binomial() {
        let g = LieAlgebraData::abelian(4);
        let (_, ring) = cohomology(&PairData::absolute(&g), &LieModuleData::trivial(4, 1), None).unwrap();
        assert_eq!(ring.betti(), vec![1, 4, 6, 4, 1]);
        let (_, ring0) =
            cohomology(&PairData::absolute(&LieAlgebraData::abelian(0)), &LieModuleData::trivial(0, 1), None).unwrap();
        assert_eq!(ring0.betti(), vec![1]);
    }
}
