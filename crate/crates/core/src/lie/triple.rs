use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebraData;
use super::module::LieModuleData;
use crate::error::{HscError, Result};
use crate::linalg::{Echelon, RationalMatrix, SpanSolver, SparseVec, SubquotientHandle, SubspaceHandle};
use crate::rational::Rational;

/// Dimensions of the blocks `I_k, I_L, J_k, J_L` of the adapted basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub ik: usize,
    pub il: usize,
    pub jk: usize,
    pub jl: usize,
}

impl Blocks {
    pub fn ideal(&self) -> usize {
        self.ik + self.il
    }

    pub fn total(&self) -> usize {
        self.ik + self.il + self.jk + self.jl
    }

    pub fn complement(&self) -> usize {
        self.jk + self.jl
    }

    /// Adapted indices spanning `k`.
    pub fn k_indices(&self) -> Vec<usize> {
        (0..self.ik).chain(self.ideal()..self.ideal() + self.jk).collect()
    }
}

/// A Lie algebra with a subalgebra `k`, an ideal `I`, and a `k`-stable complement
/// `J` of `I` commuting with `I ∩ k`.
///
/// Besides the data in the given basis, the triple carries an adapted basis
/// ordered as `[I_k | I_L | J_k | J_L]`; in it the projection `π: g → I` along
/// `J` is the coordinate projection onto the first `dim I` coordinates.
#[derive(Clone, Debug)]
pub struct TripleData {
    g: LieAlgebraData,
    k: SubspaceHandle,
    ideal: SubspaceHandle,
    i_k: SubspaceHandle,
    complement_j: SubspaceHandle,
    pi: RationalMatrix,
    basis: RationalMatrix,
    inverse: RationalMatrix,
    adapted: LieAlgebraData,
    blocks: Blocks,
}

fn check_pieces(g: &LieAlgebraData, k: &SubspaceHandle, ideal: &SubspaceHandle) -> Result<()> {
    let n = g.dim();
    if k.ambient_dim() != n || ideal.ambient_dim() != n {
        return Err(HscError::AmbientMismatch { left: k.ambient_dim().max(ideal.ambient_dim()), right: n });
    }
    if !g.is_subalgebra(k) {
        return Err(HscError::NotSubalgebra { what: "k".into() });
    }
    if !g.is_ideal(ideal) {
        return Err(HscError::NotIdeal { what: "I".into() });
    }
    Ok(())
}

/// Solves for `Q` with `π = B Q` (B = basis of I with I_k first) subject to
/// `π|_I = id`, `k`-equivariance and `π(k) ⊆ I_k`; returns the first basic solution.
fn solve_projection(g: &LieAlgebraData, k: &SubspaceHandle, ib: &[SparseVec], d_ik: usize) -> Result<RationalMatrix> {
    let n = g.dim();
    let di = ib.len();
    let nvars = di * n;
    let var = |a: usize, j: usize| a * n + j;
    let rhs_col = nvars;
    let mut rows: Vec<SparseVec> = Vec::new();
    for (b, bv) in ib.iter().enumerate() {
        for a in 0..di {
            let mut e: Vec<(usize, Rational)> = bv.iter().map(|(j, x)| (var(a, j), x.clone())).collect();
            if a == b {
                e.push((rhs_col, Rational::ONE));
            }
            rows.push(SparseVec::from_entries(e));
        }
    }
    let in_ideal = SpanSolver::new(ib.iter());
    for x in k.basis() {
        let ad = g.ad(x);
        // A_x with ad_x B_b = Σ_a A_x[a, b] B_a.
        let ax: Vec<SparseVec> = ib
            .iter()
            .map(|b| in_ideal.solve(&ad.apply(b)).expect("I is an ideal"))
            .collect();
        let ad_rows = ad.row_vectors();
        for a in 0..di {
            for j in 0..n {
                let mut e: Vec<(usize, Rational)> = Vec::new();
                // (Q ad_x)[a, j] = Σ_l q_{a,l} ad_x[l, j]
                for (l, row) in ad_rows.iter().enumerate() {
                    let c = row.get(j);
                    if !c.is_zero() {
                        e.push((var(a, l), c));
                    }
                }
                // − (A_x Q)[a, j] = − Σ_c A_x[a, c] q_{c, j}
                for (c, col) in ax.iter().enumerate() {
                    let v = col.get(a);
                    if !v.is_zero() {
                        e.push((var(c, j), -v));
                    }
                }
                let r = SparseVec::from_entries(e);
                if !r.is_zero() {
                    rows.push(r);
                }
            }
        }
        for a in d_ik..di {
            let r = SparseVec::from_entries(x.iter().map(|(j, c)| (var(a, j), c.clone())));
            if !r.is_zero() {
                rows.push(r);
            }
        }
    }
    let mut ech = Echelon::new();
    for r in &rows {
        ech.insert(r);
    }
    let sol_rows = ech.into_sorted_rows();
    let mut q = vec![Vec::new(); n];
    for r in &sol_rows {
        let (p, _) = r.leading().unwrap();
        if p == rhs_col {
            return Err(HscError::NoEquivariantComplement(
                "the equations for a k-equivariant projection onto I are inconsistent".into(),
            ));
        }
        let v = r.get(rhs_col);
        if !v.is_zero() {
            q[p % n].push((p / n, v));
        }
    }
    Ok(RationalMatrix::from_columns(di, q.into_iter().map(SparseVec::from_entries).collect()))
}

impl TripleData {
    /// Builds the triple, solving for the equivariant projection onto the ideal.
    pub fn build(g: &LieAlgebraData, k_basis: &[SparseVec], ideal_basis: &[SparseVec]) -> Result<Self> {
        let n = g.dim();
        let k = SubspaceHandle::span(n, k_basis.iter());
        let ideal = SubspaceHandle::span(n, ideal_basis.iter());
        check_pieces(g, &k, &ideal)?;
        let i_k = ideal.intersection(&k)?;
        let i_l = SubquotientHandle::new(ideal.clone(), i_k.clone())?;
        let ib: Vec<SparseVec> = i_k.basis().iter().chain(i_l.representatives()).cloned().collect();
        let q = solve_projection(g, &k, &ib, i_k.dim())?;
        let b = RationalMatrix::from_columns(n, ib);
        let pi = b.mul(&q);
        let j_vecs: Vec<SparseVec> = (0..n).map(|j| SparseVec::unit(j).sub(pi.column(j))).collect();
        let complement_j = SubspaceHandle::span(n, j_vecs.iter());
        Self::assemble(g, k, ideal, i_k, complement_j)
    }

    /// Builds the triple from a caller-chosen complement `J`, which is checked.
    pub fn with_complement(
        g: &LieAlgebraData,
        k_basis: &[SparseVec],
        ideal_basis: &[SparseVec],
        complement_basis: &[SparseVec],
    ) -> Result<Self> {
        let n = g.dim();
        let k = SubspaceHandle::span(n, k_basis.iter());
        let ideal = SubspaceHandle::span(n, ideal_basis.iter());
        check_pieces(g, &k, &ideal)?;
        let i_k = ideal.intersection(&k)?;
        let complement_j = SubspaceHandle::span(n, complement_basis.iter());
        if complement_j.dim() + ideal.dim() != n || !ideal.intersection(&complement_j)?.is_zero() {
            return Err(HscError::NoEquivariantComplement("J is not a complement of I".into()));
        }
        for x in k.basis() {
            for y in complement_j.basis() {
                if !complement_j.contains_vector(&g.bracket(x, y)) {
                    return Err(HscError::NoEquivariantComplement("J is not k-stable".into()));
                }
            }
        }
        Self::assemble(g, k, ideal, i_k, complement_j)
    }

    fn assemble(
        g: &LieAlgebraData,
        k: SubspaceHandle,
        ideal: SubspaceHandle,
        i_k: SubspaceHandle,
        complement_j: SubspaceHandle,
    ) -> Result<Self> {
        let n = g.dim();
        for z in i_k.basis() {
            for y in complement_j.basis() {
                if !g.bracket(z, y).is_zero() {
                    return Err(HscError::NoEquivariantComplement("J does not commute with I ∩ k".into()));
                }
            }
        }
        let j_k = complement_j.intersection(&k)?;
        if j_k.dim() + i_k.dim() != k.dim() {
            return Err(HscError::NoEquivariantComplement("the projection does not map k into I ∩ k".into()));
        }
        let i_l = SubquotientHandle::new(ideal.clone(), i_k.clone())?;
        let j_l = SubquotientHandle::new(complement_j.clone(), j_k.clone())?;
        let blocks = Blocks { ik: i_k.dim(), il: i_l.dim(), jk: j_k.dim(), jl: j_l.dim() };
        let cols: Vec<SparseVec> = i_k
            .basis()
            .iter()
            .chain(i_l.representatives())
            .chain(j_k.basis())
            .chain(j_l.representatives())
            .cloned()
            .collect();
        let basis = RationalMatrix::from_columns(n, cols);
        let adapted = g.rebase(&basis)?;
        let solver = SpanSolver::new(basis.columns().iter());
        let inverse = RationalMatrix::from_columns(
            n,
            (0..n).map(|j| solver.solve(&SparseVec::unit(j)).expect("basis is invertible")).collect(),
        );
        let di = blocks.ideal();
        let proj = RationalMatrix::from_columns(
            n,
            (0..n).map(|j| if j < di { SparseVec::unit(j) } else { SparseVec::new() }).collect(),
        );
        let pi = basis.mul(&proj).mul(&inverse);
        Ok(TripleData { g: g.clone(), k, ideal, i_k, complement_j, pi, basis, inverse, adapted, blocks })
    }

    pub fn g(&self) -> &LieAlgebraData {
        &self.g
    }

    pub fn k(&self) -> &SubspaceHandle {
        &self.k
    }

    pub fn ideal(&self) -> &SubspaceHandle {
        &self.ideal
    }

    pub fn i_k(&self) -> &SubspaceHandle {
        &self.i_k
    }

    pub fn complement_j(&self) -> &SubspaceHandle {
        &self.complement_j
    }

    /// The projection `π: g → I` along `J`, in the given basis.
    pub fn projection(&self) -> &RationalMatrix {
        &self.pi
    }

    /// Columns are the adapted basis vectors in the given basis.
    pub fn adapted_basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn adapted(&self) -> &LieAlgebraData {
        &self.adapted
    }

    pub fn blocks(&self) -> Blocks {
        self.blocks
    }

    pub fn to_adapted(&self, x: &SparseVec) -> SparseVec {
        self.inverse.apply(x)
    }

    pub fn from_adapted(&self, x: &SparseVec) -> SparseVec {
        self.basis.apply(x)
    }

    /// `(x*, x⁺)` with `x* = π(x) ∈ I` and `x⁺ = x − x* ∈ J`.
    pub fn project_star(&self, x: &SparseVec) -> (SparseVec, SparseVec) {
        let star = self.pi.apply(x);
        let plus = x.sub(&star);
        (star, plus)
    }

    /// A module over `g` re-expressed over the adapted basis.
    pub fn rebase_module(&self, m: &LieModuleData) -> LieModuleData {
        m.rebase(&self.basis)
    }

    /// The pair `(g, k)` in adapted coordinates.
    pub fn pair(&self) -> PairData {
        PairData { algebra: self.adapted.clone(), k_indices: self.blocks.k_indices() }
    }

    /// The pair `(I, I_k)`: the first `dim I` adapted coordinates.
    pub fn ideal_pair(&self) -> PairData {
        let di = self.blocks.ideal();
        let basis: Vec<SparseVec> = (0..di).map(SparseVec::unit).collect();
        let algebra = self.adapted.restrict(&basis).expect("I is an ideal");
        PairData { algebra, k_indices: (0..self.blocks.ik).collect() }
    }

    /// The pair `(g/I, k/I_k)` on the `J` coordinates.
    pub fn quotient_pair(&self) -> PairData {
        let di = self.blocks.ideal();
        let dj = self.blocks.complement();
        let mut consts = Vec::new();
        for a in 0..dj {
            for b in a + 1..dj {
                let br = self.adapted.bracket_basis(di + a, di + b);
                consts.push((a, b, br.remap(|c| c.checked_sub(di))));
            }
        }
        let algebra = LieAlgebraData::from_brackets(dj, consts).expect("quotient brackets are well-formed");
        PairData { algebra, k_indices: (0..self.blocks.jk).collect() }
    }

    /// Invariant checks on the projection; returns human-readable failures.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.g.dim();
        if self.pi.mul(&self.pi) != self.pi {
            out.push("π∘π ≠ π".into());
        }
        for x in self.k.basis() {
            for j in 0..n {
                let y = SparseVec::unit(j);
                let lhs = self.g.bracket(x, &self.pi.apply(&y));
                let rhs = self.pi.apply(&self.g.bracket(x, &y));
                if lhs != rhs {
                    out.push(format!("π not k-equivariant at basis vector {}", j + 1));
                }
            }
            let (star, _) = self.project_star(x);
            if !self.i_k.contains_vector(&star) {
                out.push("π(k) ⊄ I_k".into());
            }
        }
        for y in self.ideal.basis() {
            if self.pi.apply(y) != *y {
                out.push("π|_I ≠ id".into());
            }
        }
        for j in self.complement_j.basis() {
            for z in self.i_k.basis() {
                if !self.g.bracket(j, z).is_zero() {
                    out.push("[J, I_k] ≠ 0".into());
                }
            }
        }
        for j in 0..n {
            let x = SparseVec::unit(j);
            let (s, p) = self.project_star(&x);
            if s.add(&p) != x || !self.ideal.contains_vector(&s) || !self.complement_j.contains_vector(&p) {
                out.push(format!("x ≠ x* + x⁺ at basis vector {}", j + 1));
            }
        }
        out
    }
}

/// A Lie algebra with a subalgebra spanned by basis vectors, in the working
/// basis used for relative cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairData {
    pub algebra: LieAlgebraData,
    pub k_indices: Vec<usize>,
}

impl PairData {
    /// The absolute case `k = 0`.
    pub fn absolute(g: &LieAlgebraData) -> Self {
        PairData { algebra: g.clone(), k_indices: Vec::new() }
    }

    /// Pair from an arbitrary subalgebra basis; returns the working pair and the
    /// change of basis (columns are working basis vectors in the given basis).
    /// When `k` is already spanned by basis vectors the basis is kept.
    pub fn from_subalgebra(g: &LieAlgebraData, k_basis: &[SparseVec]) -> Result<(Self, RationalMatrix)> {
        let n = g.dim();
        let k = SubspaceHandle::span(n, k_basis.iter());
        if !g.is_subalgebra(&k) {
            return Err(HscError::NotSubalgebra { what: "k".into() });
        }
        if k.basis().iter().all(|v| v.nnz() == 1) {
            let pair = PairData { algebra: g.clone(), k_indices: k.pivots().to_vec() };
            return Ok((pair, RationalMatrix::identity(n)));
        }
        let comp = SubquotientHandle::new(SubspaceHandle::full(n), k.clone())?;
        let cols: Vec<SparseVec> = k.basis().iter().chain(comp.representatives()).cloned().collect();
        let p = RationalMatrix::from_columns(n, cols);
        let algebra = g.rebase(&p)?;
        Ok((PairData { algebra, k_indices: (0..k.dim()).collect() }, p))
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn k_mask(&self) -> u64 {
        self.k_indices.iter().fold(0u64, |m, &i| m | (1 << i))
    }

    /// Indices not in `k`.
    pub fn free_indices(&self) -> Vec<usize> {
        let m = self.k_mask();
        (0..self.dim()).filter(|i| m & (1 << i) == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(i: usize) -> SparseVec {
        SparseVec::unit(i)
    }

    #[test]
    fn trivial_k_gives_coordinate_projection() {
        let g = LieAlgebraData::sl2();
        let t = TripleData::build(&g, &[], &[unit(0), unit(1), unit(2)]).unwrap();
        assert_eq!(*t.projection(), RationalMatrix::identity(3));
        assert!(t.complement_j().is_zero());
        assert!(t.check_invariants().is_empty());
    }

    #[test]
    fn zero_ideal_gives_zero_projection() {
        let g = LieAlgebraData::sl2();
        let t = TripleData::build(&g, &[unit(0)], &[]).unwrap();
        assert!(t.projection().is_zero());
        assert_eq!(t.complement_j().dim(), 3);
        assert_eq!(t.blocks(), Blocks { ik: 0, il: 0, jk: 1, jl: 2 });
    }

    #[test]
    fn product_with_ideal_factor() {
        let g = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2());
        let k = [unit(0), unit(3)];
        let ideal = [unit(0), unit(1), unit(2)];
        let t = TripleData::build(&g, &k, &ideal).unwrap();
        assert!(t.check_invariants().is_empty(), "{:?}", t.check_invariants());
        assert_eq!(t.blocks(), Blocks { ik: 1, il: 2, jk: 1, jl: 2 });
        let (star, _) = t.project_star(&unit(0).add(&unit(3)));
        assert!(t.i_k().contains_vector(&star));
    }

    #[test]
    fn missing_complement_is_reported() {
        // Heisenberg algebra [x, y] = z with k = span{x} and the central ideal I = span{z}:
        // any complement of I contains some y + b z, and [x, y + b z] = z leaves it.
        let h = LieAlgebraData::from_int_constants(3, &[(0, 1, &[(2, 1)])]).unwrap();
        let err = TripleData::build(&h, &[unit(0)], &[unit(2)]).unwrap_err();
        assert!(matches!(err, HscError::NoEquivariantComplement(_)));
        assert!(TripleData::build(&h, &[unit(0)], &[unit(1), unit(2)]).is_ok());
    }
}
