use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sample_indices;
use super::sequence::{CheckOptions, HochschildSerre};
use crate::cochains::frame::sign;
use crate::cochains::{cohomology, cup_unchecked, Cochain, CohomologyRing, RelativeComplex};
use crate::error::{HscError, Result};
use crate::lie::{LieModuleData, ModulePairing};
use crate::linalg::{rank, solve, RationalMatrix, SparseVec, SubspaceHandle};
use crate::rational::Rational;

type Bidegree = (usize, usize);

/// Summary of the comparison `E_2 ≅ H(g/I, k/I_k) ⊗ H(I, I_k)^{g/I}` for trivial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorReport {
    /// `dim H^p(g/I, k/I_k)`.
    pub base_dims: Vec<usize>,
    /// `dim H^q(I, I_k)^{g/I}`.
    pub fiber_dims: Vec<usize>,
    /// Whether the bigraded map to the tensor product respects products.
    pub algebra_iso: bool,
    pub failures: Vec<String>,
    pub degenerates_at_e2: bool,
    pub pi_star_injective: Option<bool>,
    /// `π*(ab) = π*(a)π*(b)` on base basis classes.
    pub pi_star_multiplicative: Option<bool>,
    pub i_star_onto_invariants: Option<bool>,
    pub ker_i_star_dims: Option<Vec<usize>>,
    /// `ker i* = (A⁺)` in every degree.
    pub kernel_is_ideal: Option<bool>,
    pub free_basis: Option<bool>,
}

/// The tensor decomposition with its matrices and, under degeneration,
/// the subspaces `ker i*` and `(A⁺)` of each `H^n(g, k)`.
#[derive(Clone, Debug)]
pub struct TensorDecomposition {
    pub report: TensorReport,
    /// `Ψ: E_2^{pq} → A^p ⊗ B^q` with target index `i · dim B^q + j`.
    pub blocks: BTreeMap<Bidegree, RationalMatrix>,
    pub ker_i_star: Vec<SubspaceHandle>,
    pub ideal: Vec<SubspaceHandle>,
    /// `H(g/I, k/I_k)` with products.
    pub base: CohomologyRing,
    /// Matrices of `π*` per degree, present under degeneration.
    pub pi_star: Vec<RationalMatrix>,
    /// `H(g, k)` with products, present under degeneration.
    pub ring: Option<CohomologyRing>,
}

/// `H(g/I, k/I_k)` and the invariant classes with their products.
struct Factors {
    base_cx: RelativeComplex,
    base: CohomologyRing,
    inv: Vec<SubspaceHandle>,
    /// Products of invariant basis classes in invariant coordinates.
    fiber_products: BTreeMap<(usize, usize, usize, usize), SparseVec>,
}

impl Factors {
    fn base_dim(&self, p: usize) -> usize {
        if p <= self.base.top_degree() {
            self.base.group(p).dim()
        } else {
            0
        }
    }

    fn fiber_dim(&self, q: usize) -> usize {
        self.inv.get(q).map_or(0, |s| s.dim())
    }

    /// `(a ⊗ b)(a' ⊗ b') = (−1)^{p2 q1} aa' ⊗ bb'`.
    fn multiply(&self, (p1, q1): Bidegree, x: &SparseVec, (p2, q2): Bidegree, y: &SparseVec) -> SparseVec {
        let (b1, b2, b) = (self.fiber_dim(q1), self.fiber_dim(q2), self.fiber_dim(q1 + q2));
        let s = Rational::from_int(sign(p2 * q1));
        let mut out = SparseVec::new();
        for (u, xv) in x.iter() {
            for (v, yv) in y.iter() {
                let a = self.base.multiply(p1, &SparseVec::unit(u / b1), p2, &SparseVec::unit(v / b2));
                let Some(f) = self.fiber_products.get(&(q1, u % b1, q2, v % b2)) else { continue };
                let c = &(xv * yv) * &s;
                for (i, ai) in a.iter() {
                    for (j, fj) in f.iter() {
                        out = out.axpy(&(&c * &(ai * fj)), &SparseVec::unit(i * b + j));
                    }
                }
            }
        }
        out
    }
}

fn zero_if_none(v: Option<SparseVec>) -> SparseVec {
    v.unwrap_or_default()
}

impl HochschildSerre {
    /// A pairing over the triple's given basis, moved to adapted coordinates.
    pub fn adapted_pairing(&self, pairing: &ModulePairing) -> ModulePairing {
        pairing.rebase(self.fc.triple().adapted_basis())
    }

    /// `E_r^{p1 q1} ⊗ E_r^{p2 q2} → E_r^{p1+p2, q1+q2}` in page coordinates, through
    /// an adapted ring pairing `M ⊗ M → M`. `None` when the target is outside the grid.
    pub fn page_product(
        &self,
        r: usize,
        (p1, q1): Bidegree,
        a: &SparseVec,
        (p2, q2): Bidegree,
        b: &SparseVec,
        pairing: &ModulePairing,
    ) -> Result<Option<SparseVec>> {
        let Some(cell) = self.pages.page(r).and_then(|pg| pg.cell(p1 + p2, q1 + q2)) else {
            return Ok(None);
        };
        let missing = || HscError::NotWellDefined(format!("E_{r} is not computed at a factor"));
        let ra = self.pages.truncated_class_rep(&self.fc, r, p1, q1, a).ok_or_else(missing)?;
        let rb = self.pages.truncated_class_rep(&self.fc, r, p2, q2, b).ok_or_else(missing)?;
        let c = self.fc.complex().cup_coords(p1 + q1, &ra, p2 + q2, &rb, pairing);
        cell.e
            .coords(&c)
            .map(Some)
            .map_err(|_| HscError::NotWellDefined(format!("a product of E_{r} classes leaves Z_{r}")))
    }

    /// `d_r(ee') = d_r(e)e' + (−1)^{p1+q1} e d_r(e')` on sampled basis pairs of every page.
    pub fn check_leibniz(&self, pairing: &ModulePairing, opts: &CheckOptions) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for pg in self.pages.pages() {
            let r = pg.r;
            let cells: Vec<(Bidegree, usize)> = pg.cells().map(|(k, c)| (k, c.e.dim())).collect();
            for &(c1, d1) in &cells {
                for &(c2, d2) in &cells {
                    let (p, q) = (c1.0 + c2.0, c1.1 + c2.1);
                    if pg.cell(p, q).is_none() {
                        continue;
                    }
                    let seed = opts.seed ^ ((r * 4096 + c1.0 * 512 + c1.1 * 64 + c2.0 * 8 + c2.1) as u64);
                    let is = sample_indices(d1, opts.sample_limit.min(8), seed);
                    let js = sample_indices(d2, opts.sample_limit.min(8), seed.rotate_left(17));
                    for &i in &is {
                        for &j in &js {
                            let (e1, e2) = (SparseVec::unit(i), SparseVec::unit(j));
                            let prod = zero_if_none(self.page_product(r, c1, &e1, c2, &e2, pairing)?);
                            let Some(t) = pg.target(p, q) else { continue };
                            let lhs = pg.differential(p, q).apply(&prod);
                            let mut rhs = SparseVec::new();
                            if let Some(t1) = pg.target(c1.0, c1.1) {
                                let de = pg.differential(c1.0, c1.1).apply(&e1);
                                rhs = rhs.add(&zero_if_none(self.page_product(r, t1, &de, c2, &e2, pairing)?));
                            }
                            if let Some(t2) = pg.target(c2.0, c2.1) {
                                let de = pg.differential(c2.0, c2.1).apply(&e2);
                                let s = Rational::from_int(sign(c1.0 + c1.1));
                                let term = zero_if_none(self.page_product(r, c1, &e1, t2, &de, pairing)?);
                                rhs = rhs.axpy(&s, &term);
                            }
                            if lhs != rhs {
                                out.push(format!("r={r}: Leibniz fails for {c1:?}#{i} · {c2:?}#{j} → {t:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The cup pairing `H^{q1}(I, I_k; M) ⊗ H^{q2}(I, I_k; M) → H^{q1+q2}(I, I_k; M)` on classes.
    pub fn fiber_pairing(&self, q1: usize, q2: usize, pairing: &ModulePairing) -> Result<ModulePairing> {
        let q = q1 + q2;
        let (l1, l2, l) = (self.dc.level(q1), self.dc.level(q2), self.dc.level(q));
        let mut table = Vec::new();
        for a in l1.cohomology.representatives() {
            for b in l2.cohomology.representatives() {
                let c = cup_unchecked(&Cochain::from_coords(&l1.frame, a), &Cochain::from_coords(&l2.frame, b), pairing);
                let v = c
                    .to_coords(&l.frame)
                    .ok_or_else(|| HscError::NotWellDefined("cup of ideal cochains leaves the ideal".into()))?;
                table.push(
                    l.cohomology
                        .coords(&v)
                        .map_err(|_| HscError::NotACocycle(format!("cup of classes in degrees {q1}, {q2}")))?,
                );
            }
        }
        let module = |q: usize| self.hq.complex(q).ops().module().clone();
        ModulePairing::new(module(q1), module(q2), module(q), table)
    }

    /// Cup product `H^{p1}(H^{q1}) ⊗ H^{p2}(H^{q2}) → H^{p1+p2}(H^{q1+q2})` on class coordinates.
    fn base_cup(&self, (p1, q1): Bidegree, a: &SparseVec, (p2, q2): Bidegree, b: &SparseVec, hp: &ModulePairing) -> Result<SparseVec> {
        let (c1, c2, c) = (self.hq.complex(q1), self.hq.complex(q2), self.hq.complex(q1 + q2));
        let ra = self.hq.ring(q1).group(p1).representative(a);
        let rb = self.hq.ring(q2).group(p2).representative(b);
        let prod = cup_unchecked(&c1.to_cochain(p1, &ra), &c2.to_cochain(p2, &rb), hp);
        let v = c
            .from_cochain(&prod)
            .ok_or_else(|| HscError::NotWellDefined("cup of quotient cochains is not relative".into()))?;
        self.hq
            .ring(q1 + q2)
            .group(p1 + p2)
            .coords(&v)
            .map_err(|_| HscError::NotACocycle("cup of quotient cocycles".into()))
    }

    /// `ψ(ee') = (−1)^{p2 q1} ψ(e) ψ(e')` on all basis pairs of `E_2`.
    pub fn check_psi_products(&self, pairing: &ModulePairing) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let degs = self.dc.bidegrees(self.top_degree());
        let mut psi = BTreeMap::new();
        for &d in &degs {
            psi.insert(d, self.psi_raw(d.0, d.1)?);
        }
        let mut fiber = BTreeMap::new();
        for &(p1, q1) in &degs {
            for &(p2, q2) in &degs {
                let (p, q) = (p1 + p2, q1 + q2);
                if !self.in_range(p, q) {
                    continue;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = fiber.entry((q1, q2)) {
                    e.insert(self.fiber_pairing(q1, q2, pairing)?);
                }
                let hp = &fiber[&(q1, q2)];
                let s = Rational::from_int(sign(p2 * q1));
                for i in 0..psi[&(p1, q1)].cols() {
                    for j in 0..psi[&(p2, q2)].cols() {
                        let (e1, e2) = (SparseVec::unit(i), SparseVec::unit(j));
                        let prod = zero_if_none(self.page_product(2, (p1, q1), &e1, (p2, q2), &e2, pairing)?);
                        let lhs = psi[&(p, q)].apply(&prod);
                        let rhs = self
                            .base_cup((p1, q1), psi[&(p1, q1)].column(i), (p2, q2), psi[&(p2, q2)].column(j), hp)?
                            .scale(&s);
                        if lhs != rhs {
                            out.push(format!("ψ(e e') ≠ ±ψ(e)ψ(e') for ({p1},{q1})#{i} · ({p2},{q2})#{j}"));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn factors(&self) -> Result<Factors> {
        let qp = self.hq.quotient_pair();
        let dj = qp.dim();
        let (base_cx, base) =
            cohomology(qp, &LieModuleData::trivial(dj, 1), Some(&ModulePairing::trivial(dj)))?;
        let max_q = self.dc.max_q();
        let inv: Vec<SubspaceHandle> = (0..=max_q).map(|q| self.hq.invariants(q)).collect();
        let triv = ModulePairing::trivial(self.fc.triple().blocks().total());
        let mut fiber_products = BTreeMap::new();
        for q1 in 0..=max_q {
            for q2 in 0..=max_q - q1 {
                let hp = self.fiber_pairing(q1, q2, &triv)?;
                for (a, da) in inv[q1].basis().iter().enumerate() {
                    for (b, db) in inv[q2].basis().iter().enumerate() {
                        let v = hp.pair(da, db);
                        let c = inv[q1 + q2].coords(&v).ok_or_else(|| {
                            HscError::NotWellDefined(format!("product of invariants in degrees {q1}, {q2} is not invariant"))
                        })?;
                        fiber_products.insert((q1, a, q2, b), c);
                    }
                }
            }
        }
        Ok(Factors { base_cx, base, inv, fiber_products })
    }

    /// `F_{pq}: A^p ⊗ B^q → H^p(g/I, k/I_k; H^q)`, `[a] ⊗ δ ↦ [a δ]`.
    fn tensor_inclusion(&self, f: &Factors, p: usize, q: usize) -> Result<RationalMatrix> {
        let qcx = self.hq.complex(q);
        let group = self.hq.ring(q).group(p);
        let mut cols = Vec::new();
        for a in f.base.representatives(p) {
            for d in f.inv[q].basis() {
                let mut e = Vec::new();
                for (idx, x) in a.iter() {
                    let (mask, _) = f.base_cx.frame(p).entry(idx);
                    for (c, y) in d.iter() {
                        let i = qcx
                            .frame(p)
                            .index(mask, c)
                            .ok_or_else(|| HscError::NotWellDefined("quotient frames disagree".into()))?;
                        e.push((i, x * y));
                    }
                }
                let v = SparseVec::from_entries(e);
                cols.push(
                    group
                        .coords(&v)
                        .map_err(|_| HscError::NotACocycle(format!("a ⊗ δ in bidegree ({p},{q})")))?,
                );
            }
        }
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// `π*: H^p(g/I, k/I_k) → H^p(g, k)` on trivial coefficients.
    fn pi_star(&self, f: &Factors, p: usize) -> Result<RationalMatrix> {
        let di = self.dc.ideal_dim();
        let group = self.ring.group(p);
        let cols = f
            .base
            .representatives(p)
            .iter()
            .map(|a| {
                let mut c = Cochain::zero(p);
                for (idx, x) in a.iter() {
                    let (mask, m) = f.base_cx.frame(p).entry(idx);
                    c.add_term(mask << di, m, x);
                }
                let v = self
                    .fc
                    .complex()
                    .from_cochain(&c)
                    .ok_or_else(|| HscError::NotWellDefined("π* leaves the relative frame".into()))?;
                group.coords(&v).map_err(|_| HscError::NotACocycle(format!("π* of a class in degree {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// For trivial one-dimensional coefficients: checks that every `g/I`-module
    /// `H^q(I, I_k)` satisfies `H(g/I, k/I_k; H^q) = H(g/I, k/I_k) ⊗ (H^q)^{g/I}`,
    /// builds `Ψ: E_2 → A ⊗ B` and compares products; when the sequence
    /// degenerates at `E_2` also computes `π*`, `i*`, `ker i*` and a free basis.
    pub fn tensor_decomposition(&self) -> Result<TensorDecomposition> {
        let m = self.fc.module();
        if m.dim() != 1 || !m.is_trivial() {
            return Err(HscError::InvalidModule("the tensor decomposition needs trivial one-dimensional coefficients".into()));
        }
        let f = self.factors()?;
        let (max_p, max_q) = (self.dc.max_p(), self.dc.max_q());
        let mut failures = Vec::new();
        let mut blocks = BTreeMap::new();
        for q in 0..=max_q {
            let mut fs = Vec::new();
            for p in 0..=max_p {
                let fm = self.tensor_inclusion(&f, p, q)?;
                if fm.rows() != fm.cols() || rank(&fm) != fm.cols() {
                    return Err(HscError::HypothesisFails { q });
                }
                fs.push(fm);
            }
            for (p, fm) in fs.iter().enumerate() {
                if q == 0 && *fm != RationalMatrix::identity(fm.cols()) {
                    failures.push(format!("Ψ is not the identity on ({p},0)"));
                }
                let psi = self.psi(p, q)?;
                let cols = psi
                    .columns()
                    .iter()
                    .map(|c| solve(fm, c).expect("F is invertible"))
                    .collect::<Vec<_>>();
                blocks.insert((p, q), RationalMatrix::from_columns(fm.cols(), cols));
            }
        }

        let triv = ModulePairing::trivial(self.fc.triple().blocks().total());
        let degs = self.dc.bidegrees(self.top_degree());
        for &(p1, q1) in &degs {
            for &(p2, q2) in &degs {
                let (p, q) = (p1 + p2, q1 + q2);
                if !self.in_range(p, q) {
                    continue;
                }
                for i in 0..blocks[&(p1, q1)].cols() {
                    for j in 0..blocks[&(p2, q2)].cols() {
                        let (e1, e2) = (SparseVec::unit(i), SparseVec::unit(j));
                        let prod = zero_if_none(self.page_product(2, (p1, q1), &e1, (p2, q2), &e2, &triv)?);
                        let lhs = blocks[&(p, q)].apply(&prod);
                        let rhs = f.multiply(
                            (p1, q1),
                            blocks[&(p1, q1)].column(i),
                            (p2, q2),
                            blocks[&(p2, q2)].column(j),
                        );
                        if lhs != rhs {
                            failures.push(format!("Ψ is not multiplicative on ({p1},{q1})#{i} · ({p2},{q2})#{j}"));
                        }
                    }
                }
            }
        }
        let algebra_iso = failures.is_empty();

        let top = self.top_degree();
        let degenerate = self.pages.degenerates_at(2);
        let mut report = TensorReport {
            base_dims: (0..=max_p).map(|p| f.base_dim(p)).collect(),
            fiber_dims: (0..=max_q).map(|q| f.fiber_dim(q)).collect(),
            algebra_iso,
            failures,
            degenerates_at_e2: degenerate,
            pi_star_injective: None,
            pi_star_multiplicative: None,
            i_star_onto_invariants: None,
            ker_i_star_dims: None,
            kernel_is_ideal: None,
            free_basis: None,
        };
        let mut ker_i_star = Vec::new();
        let mut ideal = Vec::new();
        let mut pi_star = Vec::new();
        let mut full_ring = None;
        if degenerate {
            let mut ring = self.ring.clone();
            ring.compute_products(self.fc.complex(), &triv)?;
            let pis: Vec<RationalMatrix> = (0..=max_p).map(|p| self.pi_star(&f, p)).collect::<Result<_>>()?;
            report.pi_star_injective = Some(pis.iter().all(|m| rank(m) == m.cols()));
            let mut mult_ok = true;
            for p1 in 0..=max_p {
                for p2 in 0..=max_p - p1 {
                    for i in 0..f.base_dim(p1) {
                        for j in 0..f.base_dim(p2) {
                            let (a, b) = (SparseVec::unit(i), SparseVec::unit(j));
                            let lhs = pis[p1 + p2].apply(&f.base.multiply(p1, &a, p2, &b));
                            let rhs = ring.multiply(p1, pis[p1].column(i), p2, pis[p2].column(j));
                            mult_ok &= lhs == rhs;
                        }
                    }
                }
            }
            report.pi_star_multiplicative = Some(mult_ok);
            let js: Vec<RationalMatrix> = (0..=top)
                .map(|n| self.hq.restriction_matrix(&self.fc, &self.dc, &self.ring, n))
                .collect::<Result<_>>()?;
            report.i_star_onto_invariants =
                Some((0..=max_q).all(|q| SubspaceHandle::column_span(&js[q]) == f.inv[q]));
            let mut kernel_ok = true;
            let mut free_ok = true;
            for n in 0..=top {
                let dim = ring.group(n).dim();
                let ker = SubspaceHandle::kernel(&js[n]);
                let mut gens = Vec::new();
                for p in 1..=n.min(max_p) {
                    for a in pis[p].columns() {
                        for h in 0..ring.group(n - p).dim() {
                            gens.push(ring.multiply(p, a, n - p, &SparseVec::unit(h)));
                        }
                    }
                }
                let span = SubspaceHandle::span_owned(dim, gens);
                kernel_ok &= span == ker;
                let mut free = Vec::new();
                for q in 0..=n.min(max_q) {
                    let p = n - q;
                    if p > max_p {
                        continue;
                    }
                    for d in f.inv[q].basis() {
                        let Some(b) = solve(&js[q], d) else {
                            free_ok = false;
                            continue;
                        };
                        for a in pis[p].columns() {
                            free.push(ring.multiply(p, a, q, &b));
                        }
                    }
                }
                let fm = RationalMatrix::from_columns(dim, free);
                free_ok &= fm.cols() == dim && rank(&fm) == dim;
                ker_i_star.push(ker);
                ideal.push(span);
            }
            report.ker_i_star_dims = Some(ker_i_star.iter().map(|k| k.dim()).collect());
            report.kernel_is_ideal = Some(kernel_ok);
            report.free_basis = Some(free_ok);
            pi_star = pis;
            full_ring = Some(ring);
        }
        Ok(TensorDecomposition { report, blocks, ker_i_star, ideal, base: f.base, pi_star, ring: full_ring })
    }
}
