use rayon::prelude::*;

use super::bicomplex::DoubleComplex;
use super::filtration::FilteredComplexState;
use crate::cochains::{CohomologyRing, RelativeComplex};
use crate::error::{HscError, Result};
use crate::lie::{LieAlgebraData, LieModuleData, PairData};
use crate::linalg::{RationalMatrix, SparseVec};

/// `H^q(I, I_k; M)` as a `g/I`-module, `x·[c] = [θ_{x⁺} c]`, with the relative
/// complexes `C(g/I, k/I_k; H^q(I, I_k; M))` and their cohomology.
#[derive(Debug)]
pub struct HqModule {
    ideal_dim: usize,
    /// `actions[q][x]` for every adapted index `x`.
    actions: Vec<Vec<RationalMatrix>>,
    quotient_pair: PairData,
    quotient: Vec<(RelativeComplex, CohomologyRing)>,
}

impl HqModule {
    pub fn new(fc: &FilteredComplexState, dc: &DoubleComplex) -> Result<Self> {
        let triple = fc.triple();
        let n = triple.blocks().total();
        let di = dc.ideal_dim();
        let quotient_pair = triple.quotient_pair();
        let per_q: Vec<Result<(Vec<RationalMatrix>, RelativeComplex, CohomologyRing)>> = (0..=dc.max_q())
            .into_par_iter()
            .map(|q| {
                let level = dc.level(q);
                let h = &level.cohomology;
                let dim = h.dim();
                let mut acts = Vec::with_capacity(n);
                for x in 0..n {
                    if x < di {
                        acts.push(RationalMatrix::zeros(dim, dim));
                        continue;
                    }
                    let cols = h
                        .representatives()
                        .iter()
                        .map(|rep| {
                            h.coords(&level.module.action(x).apply(rep)).map_err(|_| {
                                HscError::NotACocycle(format!("θ of a class in H^{q}(I, I_k; M) is not a cocycle"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    acts.push(RationalMatrix::from_columns(dim, cols));
                }
                let module = LieModuleData::new(dim, acts[di..].to_vec())?;
                let cx = RelativeComplex::new(&quotient_pair, &module)?;
                let ring = cx.cohomology()?;
                Ok((acts, cx, ring))
            })
            .collect();
        let mut actions = Vec::new();
        let mut quotient = Vec::new();
        for r in per_q {
            let (a, cx, ring) = r?;
            actions.push(a);
            quotient.push((cx, ring));
        }
        Ok(HqModule { ideal_dim: di, actions, quotient_pair, quotient })
    }

    pub fn max_q(&self) -> usize {
        self.actions.len() - 1
    }

    /// Matrix of `[c] ↦ [θ_{x⁺} c]` for the adapted basis vector `x`.
    pub fn action(&self, q: usize, x: usize) -> &RationalMatrix {
        &self.actions[q][x]
    }

    /// Action of an arbitrary adapted vector.
    pub fn action_of(&self, q: usize, v: &SparseVec) -> RationalMatrix {
        let d = self.dim(q);
        v.iter().fold(RationalMatrix::zeros(d, d), |acc, (x, c)| acc.add(&self.actions[q][x].scale(c)))
    }

    pub fn dim(&self, q: usize) -> usize {
        self.quotient.get(q).map_or(0, |(cx, _)| cx.ops().module().dim())
    }

    /// The pair `(g/I, k/I_k)`.
    pub fn quotient_pair(&self) -> &PairData {
        &self.quotient_pair
    }

    pub fn quotient_algebra(&self) -> &LieAlgebraData {
        &self.quotient_pair.algebra
    }

    /// `C(g/I, k/I_k; H^q(I, I_k; M))`.
    pub fn complex(&self, q: usize) -> &RelativeComplex {
        &self.quotient[q].0
    }

    /// `H(g/I, k/I_k; H^q(I, I_k; M))`.
    pub fn ring(&self, q: usize) -> &CohomologyRing {
        &self.quotient[q].1
    }

    /// `dim H^p(H^q)`, zero out of range.
    pub fn cohomology_dim(&self, p: usize, q: usize) -> usize {
        self.quotient.get(q).filter(|(cx, _)| p <= cx.top_degree()).map_or(0, |(_, r)| r.group(p).dim())
    }

    /// The `g/I`-invariants `H^q(I, I_k; M)^{g/I}` as a subspace of class coordinates.
    pub fn invariants(&self, q: usize) -> crate::linalg::SubspaceHandle {
        let d = self.dim(q);
        let stacked = self.actions[q][self.ideal_dim..].iter().fold(RationalMatrix::zeros(0, d), |acc, m| acc.vstack(m));
        crate::linalg::SubspaceHandle::kernel(&stacked)
    }

    /// `θ_x` preserves `Z^q` and `B^q` for `x ∈ J`; when `I_k = 0` it maps `Z^q` into `B^q` for `x ∈ I`.
    pub fn check_well_defined(&self, dc: &DoubleComplex) -> Vec<String> {
        let mut out = Vec::new();
        let di = self.ideal_dim;
        for q in 0..=self.max_q() {
            let level = dc.level(q);
            for x in 0..level.module.algebra_dim() {
                let act = level.module.action(x);
                if x < di {
                    // Only in the absolute case does θ_x, x ∈ I, preserve the ideal's cochains.
                    if dc.max_q() == di && !level.cocycles.basis().iter().all(|z| level.coboundaries.contains_vector(&act.apply(z))) {
                        out.push(format!("q={q}: ideal element {x} acts nontrivially on H^q"));
                    }
                } else {
                    if !level.coboundaries.basis().iter().all(|b| level.coboundaries.contains_vector(&act.apply(b))) {
                        out.push(format!("q={q}: θ_{x} does not preserve B^q(I, I_k; M)"));
                    }
                    if !level.cocycles.basis().iter().all(|z| level.cocycles.contains_vector(&act.apply(z))) {
                        out.push(format!("q={q}: θ_{x} does not preserve Z^q(I, I_k; M)"));
                    }
                }
            }
        }
        out
    }

    /// `A([x, y]) = [A(x), A(y)]` for all adapted basis pairs.
    pub fn check_brackets(&self, g: &LieAlgebraData) -> Vec<String> {
        let mut out = Vec::new();
        let n = g.dim();
        for q in 0..=self.max_q() {
            for x in 0..n {
                for y in x + 1..n {
                    let lhs = self.action_of(q, g.bracket_basis(x, y));
                    let (ax, ay) = (&self.actions[q][x], &self.actions[q][y]);
                    if lhs != ax.mul(ay).sub(&ay.mul(ax)) {
                        out.push(format!("q={q}: action of [e_{x}, e_{y}] is not the commutator"));
                    }
                }
            }
        }
        out
    }

    /// Matrix of the restriction `j*: H^n(g, k; M) → H^n(I, I_k; M)`.
    pub fn restriction_matrix(
        &self,
        fc: &FilteredComplexState,
        dc: &DoubleComplex,
        ring: &CohomologyRing,
        n: usize,
    ) -> Result<RationalMatrix> {
        let rows = if n <= self.max_q() { self.dim(n) } else { 0 };
        let mut cols = Vec::new();
        for rep in ring.representatives(n) {
            if rows == 0 {
                cols.push(SparseVec::new());
                continue;
            }
            let level = dc.level(n);
            let c = fc.complex().to_cochain(n, rep).restrict_support(fc.ideal_mask());
            let v = c
                .to_coords(&level.frame)
                .ok_or_else(|| HscError::NotWellDefined("restricted cochain leaves the ideal frame".into()))?;
            let cls = level
                .cohomology
                .coords(&v)
                .map_err(|_| HscError::NotACocycle(format!("restriction of a class in degree {n}")))?;
            cols.push(cls);
        }
        Ok(RationalMatrix::from_columns(rows, cols))
    }

    /// Every `j*`-image is `g/I`-invariant.
    pub fn check_restriction_invariance(
        &self,
        fc: &FilteredComplexState,
        dc: &DoubleComplex,
        ring: &CohomologyRing,
    ) -> Vec<String> {
        let mut out = Vec::new();
        for n in 0..=fc.top_degree().min(self.max_q()) {
            match self.restriction_matrix(fc, dc, ring, n) {
                Ok(j) => {
                    for (x, a) in self.actions[n].iter().enumerate() {
                        if !a.mul(&j).is_zero() {
                            out.push(format!("degree {n}: restricted classes are not fixed by e_{x}"));
                        }
                    }
                }
                Err(e) => out.push(format!("degree {n}: {e}")),
            }
        }
        out
    }
}
