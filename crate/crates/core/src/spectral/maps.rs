use std::collections::BTreeMap;

use super::sample_indices;
use super::sequence::{CheckOptions, HochschildSerre};
use crate::cochains::Cochain;
use crate::error::{HscError, Result};
use crate::linalg::{rank, RationalMatrix, SparseVec};
use crate::rational::Rational;

fn is_iso(m: &RationalMatrix) -> bool {
    m.rows() == m.cols() && rank(m) == m.cols()
}

impl HochschildSerre {
    /// `α: C^p(g/I, k/I_k; Z^q) → C^p(g/I, k/I_k; H^q)`, from double complex
    /// coordinates to frame coordinates of the quotient complex with values in `H^q`.
    pub fn alpha(&self, p: usize, q: usize, z: &SparseVec) -> Result<SparseVec> {
        let t = self.dc.target(p, q);
        let level = self.dc.level(q);
        let qf = self.hq.complex(q).frame(p);
        let di = self.dc.ideal_dim();
        let vlen = level.frame.len();
        let mut by_mask: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (idx, x) in z.iter() {
            by_mask.entry(idx / vlen).or_default().push((idx % vlen, x.clone()));
        }
        let mut out = Vec::new();
        for (r, vals) in by_mask {
            let mask = t.frame.mask_of_rank(r);
            let cls = level
                .cohomology
                .coords(&SparseVec::from_entries(vals))
                .map_err(|_| HscError::NotACocycle(format!("a value of a ({p},{q}) cochain is not in Z^{q}(I, I_k; M)")))?;
            for (c, y) in cls.iter() {
                let i = qf
                    .index(mask >> di, c)
                    .ok_or_else(|| HscError::NotWellDefined("α leaves the quotient frame".into()))?;
                out.push((i, y.clone()));
            }
        }
        Ok(SparseVec::from_entries(out))
    }

    /// `φ = α ∘ s_p: E_1^{pq} → C^p(g/I, k/I_k; H^q)` in page and canonical bases.
    pub fn phi(&self, p: usize, q: usize) -> Result<RationalMatrix> {
        let cell = self.pages.page(1).and_then(|pg| pg.cell(p, q));
        let reps = cell.map_or(&[][..], |c| c.e.representatives());
        if !self.in_range(p, q) {
            return Ok(RationalMatrix::zeros(0, reps.len()));
        }
        let space = self.hq.complex(q).space(p);
        let cols = reps
            .iter()
            .map(|z| {
                let a = self.alpha(p, q, &self.dc.s_map(&self.fc, p, q, z))?;
                space.coords(&a).ok_or_else(|| HscError::NotWellDefined(format!("φ at ({p},{q}) is not relative")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(space.dim(), cols))
    }

    /// `ψ` on `E_2^{pq}` without the isomorphism check.
    pub fn psi_raw(&self, p: usize, q: usize) -> Result<RationalMatrix> {
        let cell = self.pages.page(2).and_then(|pg| pg.cell(p, q));
        let reps = cell.map_or(&[][..], |c| c.e.representatives());
        if !self.in_range(p, q) {
            return Ok(RationalMatrix::zeros(0, reps.len()));
        }
        let group = self.hq.ring(q).group(p);
        let cols = reps
            .iter()
            .map(|z| {
                let a = self.alpha(p, q, &self.dc.s_map(&self.fc, p, q, z))?;
                group
                    .coords(&a)
                    .map_err(|_| HscError::NotACocycle(format!("α s_p of an E_2^({p},{q}) class is not a cocycle")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// `ψ: E_2^{pq} → H^p(g/I, k/I_k; H^q(I, I_k; M))`, which must be an isomorphism.
    pub fn psi(&self, p: usize, q: usize) -> Result<RationalMatrix> {
        let m = self.psi_raw(p, q)?;
        if !is_iso(&m) {
            return Err(HscError::PsiNotIso { p, q });
        }
        Ok(m)
    }

    /// `E_2^{p0} → H^p(g, k; M)`.
    pub fn edge_bottom(&self, p: usize) -> Result<RationalMatrix> {
        let cell = self.pages.page(2).and_then(|pg| pg.cell(p, 0));
        let reps = cell.map_or(&[][..], |c| c.e.representatives());
        let group = self.ring.group(p);
        let cols = reps
            .iter()
            .map(|z| group.coords(z).map_err(|_| HscError::NotACocycle(format!("E_2^({p},0) representative"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// `η: H^p(g/I, k/I_k; H^0(I, I_k; M)) → H^p(g, k; M)`, extending cochains by zero on the ideal.
    pub fn eta(&self, p: usize) -> Result<RationalMatrix> {
        let qcx = self.hq.complex(0);
        let h0 = &self.dc.level(0).cohomology;
        let di = self.dc.ideal_dim();
        let group = self.ring.group(p);
        let cols = self
            .hq
            .ring(0)
            .representatives(p)
            .iter()
            .map(|rep| {
                let mut c = Cochain::zero(p);
                for (idx, x) in rep.iter() {
                    let (mask, cls) = qcx.frame(p).entry(idx);
                    c.add_vector(mask << di, x, &h0.representatives()[cls]);
                }
                let v = self
                    .fc
                    .complex()
                    .from_cochain(&c)
                    .ok_or_else(|| HscError::NotWellDefined("η leaves the relative frame".into()))?;
                group.coords(&v).map_err(|_| HscError::NotACocycle(format!("η of a class in degree {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// `H^q(g, k; M) → E_2^{0q}`.
    pub fn edge_left(&self, q: usize) -> Result<RationalMatrix> {
        let cell = self
            .pages
            .page(2)
            .and_then(|pg| pg.cell(0, q))
            .ok_or_else(|| HscError::NotWellDefined(format!("E_2^(0,{q}) is not computed")))?;
        let cols = self
            .ring
            .representatives(q)
            .iter()
            .map(|z| cell.e.coords(z).map_err(|_| HscError::NotWellDefined(format!("class in degree {q} leaves Z_2"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(cell.e.dim(), cols))
    }

    /// `i*: H^q(g, k; M) → H^0(g/I, k/I_k; H^q(I, I_k; M))`.
    pub fn i_star(&self, q: usize) -> Result<RationalMatrix> {
        let j = self.hq.restriction_matrix(&self.fc, &self.dc, &self.ring, q)?;
        if q > self.dc.max_q() {
            return Ok(RationalMatrix::zeros(0, j.cols()));
        }
        let group = self.hq.ring(q).group(0);
        let frame = self.hq.complex(q).frame(0);
        let cols = j
            .columns()
            .iter()
            .map(|c| {
                let v = c.remap(|cls| frame.index(0, cls));
                group.coords(&v).map_err(|_| HscError::NotACocycle(format!("restricted class in degree {q} is not invariant")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_columns(group.dim(), cols))
    }

    /// `Z_1 = s_p^{-1}(C^p(Z^q))`, `B_1 = s_p^{-1}(C^p(B^q))` and `φ` is an isomorphism.
    pub fn check_e1(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let top = self.top_degree();
        let page = self.pages.page(1).ok_or_else(|| HscError::NotWellDefined("E_1 is not computed".into()))?;
        for n in 0..=top {
            for p in 0..=n {
                let q = n - p;
                let cell = page.cell(p, q).expect("grid cell");
                if !self.in_range(p, q) {
                    if cell.e.dim() != 0 {
                        out.push(format!("E_1^({p},{q}) ≠ 0 outside the double complex"));
                    }
                    continue;
                }
                let lvl = self.fc.level(p as i64, n);
                let s = |v: &SparseVec| self.dc.s_map(&self.fc, p, q, v);
                if lvl.preimage(s, &self.dc.cp_zq(p, q)) != cell.z {
                    out.push(format!("({p},{q}): Z_1 ≠ s_p^(-1) C^p(Z^q)"));
                }
                if lvl.preimage(s, &self.dc.cp_bq(p, q)) != cell.b {
                    out.push(format!("({p},{q}): B_1 ≠ s_p^(-1) C^p(B^q)"));
                }
                if !is_iso(&self.phi(p, q)?) {
                    out.push(format!("({p},{q}): φ is not an isomorphism"));
                }
            }
        }
        Ok(out)
    }

    /// `φ_{p+1} ∘ d_1 = d^H ∘ φ_p`.
    pub fn check_d1(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let page = self.pages.page(1).ok_or_else(|| HscError::NotWellDefined("E_1 is not computed".into()))?;
        for (p, q) in self.dc.bidegrees(self.top_degree()) {
            if page.target(p, q).is_none() || !self.in_range(p + 1, q) {
                continue;
            }
            let lhs = self.phi(p + 1, q)?.mul(page.differential(p, q));
            let rhs = self.hq.complex(q).differential_matrix(p).mul(&self.phi(p, q)?);
            if lhs != rhs {
                out.push(format!("({p},{q}): φ d_1 ≠ d^H φ"));
            }
        }
        Ok(out)
    }

    /// `α(d_+ z) = d^H α(z)` on sampled `z ∈ C^p(Z^q)`.
    pub fn check_alpha_d_plus(&self, opts: &CheckOptions) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (p, q) in self.dc.bidegrees(self.top_degree()) {
            if !self.in_range(p + 1, q) {
                continue;
            }
            let zq = self.dc.cp_zq(p, q);
            let qcx = self.hq.complex(q);
            for i in sample_indices(zq.dim(), opts.sample_limit, opts.seed ^ ((p * 64 + q) as u64)) {
                let z = &zq.basis()[i];
                let lhs = self.alpha(p + 1, q, &self.dc.d_plus(p, q, z)?)?;
                let rhs = qcx.apply_d(p, &self.alpha(p, q, z)?);
                if lhs != rhs {
                    out.push(format!("({p},{q}): α d_+ ≠ d^H α on basis vector {i}"));
                }
            }
        }
        Ok(out)
    }

    /// `ψ` is an isomorphism in every bidegree, and `E_2 = 0` outside the double complex.
    pub fn check_psi(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let top = self.top_degree();
        for n in 0..=top {
            for p in 0..=n {
                let q = n - p;
                match self.psi(p, q) {
                    Ok(_) => {}
                    Err(HscError::PsiNotIso { .. }) => out.push(format!("ψ is not an isomorphism at ({p},{q})")),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }

    /// `edge = η ∘ ψ` on the bottom row and `ψ ∘ edge = i*` on the left column.
    pub fn check_edges(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let top = self.top_degree();
        for p in 0..=top.min(self.dc.max_p()) {
            if self.edge_bottom(p)? != self.eta(p)?.mul(&self.psi_raw(p, 0)?) {
                out.push(format!("degree {p}: bottom edge ≠ η ∘ ψ"));
            }
        }
        for q in 0..=top.min(self.dc.max_q()) {
            if self.psi_raw(0, q)?.mul(&self.edge_left(q)?) != self.i_star(q)? {
                out.push(format!("degree {q}: ψ ∘ left edge ≠ i*"));
            }
        }
        Ok(out)
    }
}
