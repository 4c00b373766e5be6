use serde::{Deserialize, Serialize};

use super::parabolic::ParabolicDatum;
use crate::cochains::{cohomology, CohomologyRing, RelativeComplex};
use crate::error::{HscError, Result};
use crate::lie::{LieAlgebraData, LieModuleData, ModulePairing, TripleData};
use crate::linalg::{SparseVec, SubspaceHandle};

/// Dimensions and index sets describing a built instance (1-based roots).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub root_type: String,
    pub levi: Vec<usize>,
    pub t_support: Vec<usize>,
    pub k: Vec<usize>,
    pub g_dim: usize,
    pub u_dim: usize,
    pub l_delta_dim: usize,
}

/// `g_K = l_{K,Δ} + ũ_K ⊂ g × g` with `k = l_Δ` and ideal `ũ_K`.
///
/// The basis of `g_K` lists `ũ_K` first, `(f_α, 0)` then `(0, e_α)` for
/// `α ∉ Φ_K⁺`, followed by the diagonal copy of `l_K` in
/// [`ParabolicDatum::l_indices`] order.
#[derive(Clone, Debug)]
pub struct BKInstance {
    parabolic: ParabolicDatum,
    t_support: Vec<usize>,
    k: Vec<usize>,
    product: LieAlgebraData,
    /// Basis of `g_K` inside `g × g`.
    embedding: Vec<SparseVec>,
    g_k: LieAlgebraData,
    u_dim: usize,
    l_k: LieAlgebraData,
    /// Positions of `l_Δ` in the `g_K` basis.
    l_delta: Vec<usize>,
    triple: TripleData,
}

fn diag(n: usize, x: usize) -> SparseVec {
    SparseVec::unit(x).add(&SparseVec::unit(n + x))
}

impl BKInstance {
    /// `t_support` lists 1-based support positions in `1..=m`.
    pub fn build(parabolic: ParabolicDatum, t_support: &[usize]) -> Result<Self> {
        let k = parabolic.k_set(t_support)?;
        let mut t_support: Vec<usize> = parabolic.support_of(&k)?;
        t_support.sort_unstable();
        let g = parabolic.root().algebra();
        let n = g.dim();
        let product = g.direct_sum(g);

        let u_minus = parabolic.u_minus_indices(&k);
        let u_plus = parabolic.u_plus_indices(&k);
        let lk_idx = parabolic.l_indices(&k);
        let mut embedding: Vec<SparseVec> = u_minus
            .iter()
            .map(|&x| SparseVec::unit(x))
            .chain(u_plus.iter().map(|&x| SparseVec::unit(n + x)))
            .collect();
        let u_dim = embedding.len();
        embedding.extend(lk_idx.iter().map(|&x| diag(n, x)));

        let labels = |x: usize| g.label(x);
        let mut names: Vec<String> = u_minus
            .iter()
            .map(|&x| format!("({},0)", labels(x)))
            .chain(u_plus.iter().map(|&x| format!("(0,{})", labels(x))))
            .collect();
        names.extend(lk_idx.iter().map(|&x| format!("Δ{}", labels(x))));
        let g_k = product
            .restrict(&embedding)
            .map_err(|_| HscError::NotSubalgebra { what: "g_K".into() })?
            .with_labels(names);

        let l_k = g.restrict(&lk_idx.iter().map(|&x| SparseVec::unit(x)).collect::<Vec<_>>())?;
        let levi_idx = parabolic.l_indices(parabolic.levi());
        let l_delta: Vec<usize> = levi_idx
            .iter()
            .map(|x| u_dim + lk_idx.iter().position(|y| y == x).expect("l ⊆ l_K"))
            .collect();

        let dim = g_k.dim();
        let units = |r: std::ops::Range<usize>| r.map(SparseVec::unit).collect::<Vec<_>>();
        let k_basis: Vec<SparseVec> = l_delta.iter().map(|&i| SparseVec::unit(i)).collect();
        let triple = TripleData::with_complement(&g_k, &k_basis, &units(0..u_dim), &units(u_dim..dim))?;
        let inst = BKInstance { parabolic, t_support, k, product, embedding, g_k, u_dim, l_k, l_delta, triple };
        let failures = inst.check_invariants();
        if !failures.is_empty() {
            return Err(HscError::NotWellDefined(failures.join("; ")));
        }
        Ok(inst)
    }

    pub fn parabolic(&self) -> &ParabolicDatum {
        &self.parabolic
    }

    /// Normalized 1-based support positions.
    pub fn t_support(&self) -> &[usize] {
        &self.t_support
    }

    /// `K = I ∪ J(t)`, 0-based.
    pub fn k(&self) -> &[usize] {
        &self.k
    }

    /// `g × g`.
    pub fn product(&self) -> &LieAlgebraData {
        &self.product
    }

    /// Basis vectors of `g_K` in `g × g`.
    pub fn embedding(&self) -> &[SparseVec] {
        &self.embedding
    }

    pub fn g_k(&self) -> &LieAlgebraData {
        &self.g_k
    }

    /// `l_K ⊂ g` in its own basis, matching the diagonal block of `g_K`.
    pub fn l_k(&self) -> &LieAlgebraData {
        &self.l_k
    }

    pub fn u_dim(&self) -> usize {
        self.u_dim
    }

    /// Positions of `l_Δ` in the `g_K` basis.
    pub fn l_delta(&self) -> &[usize] {
        &self.l_delta
    }

    pub fn triple(&self) -> &TripleData {
        &self.triple
    }

    pub fn echo(&self) -> InstanceEcho {
        let one = |v: &[usize]| v.iter().map(|i| i + 1).collect();
        InstanceEcho {
            root_type: self.parabolic.root().kind().to_string(),
            levi: one(self.parabolic.levi()),
            t_support: self.t_support.clone(),
            k: one(&self.k),
            g_dim: self.g_k.dim(),
            u_dim: self.u_dim,
            l_delta_dim: self.l_delta.len(),
        }
    }

    /// Structural invariants: `ũ_K ∩ l_Δ = 0`, `ũ_K` an ideal, `g_K/ũ_K ≅ l_K`
    /// through the diagonal, `dim g_K = dim g`, and the triple's own checks.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let pn = self.product.dim();
        let u = SubspaceHandle::span(pn, self.embedding[..self.u_dim].iter());
        let ld = SubspaceHandle::span(pn, self.l_delta.iter().map(|&i| &self.embedding[i]));
        match u.intersection(&ld) {
            Ok(x) if x.is_zero() => {}
            _ => out.push("ũ_K ∩ l_Δ is nonzero".into()),
        }
        let gk = SubspaceHandle::span(pn, self.embedding.iter());
        if !self.product.is_subalgebra(&gk) {
            out.push("g_K is not closed under the bracket".into());
        }
        let dim = self.g_k.dim();
        let ideal = SubspaceHandle::coordinate(dim, 0..self.u_dim);
        if !self.g_k.is_ideal(&ideal) {
            out.push("ũ_K is not an ideal of g_K".into());
        }
        let d = self.u_dim;
        for a in 0..self.l_k.dim() {
            for b in a + 1..self.l_k.dim() {
                let q = self.g_k.bracket_basis(d + a, d + b).remap(|i| i.checked_sub(d));
                if &q != self.l_k.bracket_basis(a, b) {
                    out.push(format!("g_K/ũ_K and l_K disagree on [{}, {}]", self.l_k.label(a), self.l_k.label(b)));
                }
            }
        }
        if dim != self.parabolic.root().algebra().dim() {
            out.push(format!("dim g_K = {dim} differs from dim g"));
        }
        out.extend(self.triple.check_invariants());
        out
    }

    /// `H(g_K, l_Δ)` with cup products, over the triple's adapted basis.
    pub fn cohomology(&self) -> Result<(RelativeComplex, CohomologyRing)> {
        let pair = self.triple.pair();
        let n = pair.dim();
        cohomology(&pair, &LieModuleData::trivial(n, 1), Some(&ModulePairing::trivial(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::{CartanType, RootDatum};

    fn instance(kind: CartanType, levi: &[usize], t: &[usize]) -> BKInstance {
        let p = ParabolicDatum::new(RootDatum::new(kind).unwrap(), levi).unwrap();
        BKInstance::build(p, t).unwrap()
    }

    #[test]
    fn full_support_is_the_diagonal() {
        let inst = instance(CartanType::A(2), &[], &[1, 2]);
        assert_eq!(inst.u_dim(), 0);
        assert_eq!(inst.k(), &[0, 1]);
        assert_eq!(inst.g_k().dim(), 8);
    }

    #[test]
    fn a1_betti() {
        for t in [&[][..], &[1][..]] {
            let inst = instance(CartanType::A(1), &[], t);
            let (_, ring) = inst.cohomology().unwrap();
            assert_eq!(ring.betti(), vec![1, 0, 1]);
        }
    }

    #[test]
    fn a2_instances() {
        for t in [&[][..], &[1], &[2], &[1, 2]] {
            let inst = instance(CartanType::A(2), &[], t);
            assert_eq!(inst.u_dim(), 2 * (3 - inst.parabolic().levi_roots(inst.k()).len()));
            let (_, ring) = inst.cohomology().unwrap();
            assert_eq!(ring.betti(), vec![1, 0, 2, 0, 2, 0, 1]);
        }
        let inst = instance(CartanType::A(2), &[0], &[]);
        let (_, ring) = inst.cohomology().unwrap();
        assert_eq!(ring.betti(), vec![1, 0, 1, 0, 1]);
    }
}
