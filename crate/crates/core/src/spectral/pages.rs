use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::filtration::FilteredComplexState;
use crate::error::{HscError, Result};
use crate::linalg::{induced_map_with, kernel_basis, rank, RationalMatrix, SpanSolver, SparseVec, SubquotientHandle, SubspaceHandle};

/// One entry `E_r^{pq}` in both presentations.
#[derive(Clone, Debug)]
pub struct PageCell {
    /// `Z_r = F_p C(r) + F_{p+1} C`.
    pub z: SubspaceHandle,
    /// `B_r = d F_{p−r+1} C(r−1) + F_{p+1} C`.
    pub b: SubspaceHandle,
    /// `F_p C(r)`.
    pub a: SubspaceHandle,
    /// `G_r = F_{p+1} C(r−1) + d F_{p−r+1} C(r−1)`.
    pub g: SubspaceHandle,
    /// `Z_r / B_r`; its basis is the page basis.
    pub e: SubquotientHandle,
    /// `F_p C(r) / G_r`.
    pub e_alt: SubquotientHandle,
}

/// `Z_∞ / B_∞` for one `(p, q)`.
#[derive(Clone, Debug)]
pub struct LimitCell {
    pub z: SubspaceHandle,
    pub b: SubspaceHandle,
    pub e: SubquotientHandle,
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    cells: BTreeMap<(usize, usize), PageCell>,
    /// `d_r: E_r^{pq} → E_r^{p+r, q−r+1}` in page bases.
    differentials: BTreeMap<(usize, usize), RationalMatrix>,
}

impl Page {
    pub fn cell(&self, p: usize, q: usize) -> Option<&PageCell> {
        self.cells.get(&(p, q))
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.cell(p, q).map_or(0, |c| c.e.dim())
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), &PageCell)> {
        self.cells.iter().map(|(k, v)| (*k, v))
    }

    /// Target bidegree of `d_r` from `(p, q)`, if it is inside the grid.
    pub fn target(&self, p: usize, q: usize) -> Option<(usize, usize)> {
        let tq = (q + 1).checked_sub(self.r)?;
        let key = (p + self.r, tq);
        self.cells.contains_key(&key).then_some(key)
    }

    pub fn differential(&self, p: usize, q: usize) -> &RationalMatrix {
        &self.differentials[&(p, q)]
    }
}

/// Plain-data summary of a spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSummary {
    pub top_degree: usize,
    /// `dims[r][p][q]`, with `p + q ≤ top_degree`.
    pub dims: Vec<Vec<Vec<usize>>>,
    /// `(r, p, q, rank d_r)` for every nonzero differential.
    pub differential_ranks: Vec<(usize, usize, usize, usize)>,
    pub infinity_dims: Vec<Vec<usize>>,
    /// Smallest `r` at which the sequence degenerates.
    pub degeneration_page: Option<usize>,
}

/// All pages `E_0, …, E_R` of the Hochschild-Serre spectral sequence, computed
/// as explicit subquotients of the cochain spaces.
#[derive(Clone, Debug)]
pub struct PageState {
    top: usize,
    pages: Vec<Page>,
    limit: BTreeMap<(usize, usize), LimitCell>,
    degeneration_page: Option<usize>,
}

fn grid(top: usize) -> Vec<(usize, usize)> {
    (0..=top).flat_map(|n| (0..=n).map(move |p| (p, n - p))).collect()
}

fn build_cell(fc: &FilteredComplexState, r: usize, p: usize, q: usize) -> Result<PageCell> {
    let n = p + q;
    let (pi, ri) = (p as i64, r as i64);
    let len = fc.len(n);
    let a = fc.truncated(pi, n, ri);
    let next = fc.level(pi + 1, n);
    let z = a.sum(next)?;
    let boundary = if n == 0 {
        SubspaceHandle::zero(len)
    } else {
        fc.truncated(pi - ri + 1, n - 1, ri - 1).image(|v| fc.complex().apply_d(n - 1, v), len)
    };
    let b = boundary.sum(next)?;
    let g = fc.truncated(pi + 1, n, ri - 1).sum(&boundary)?;
    let e = SubquotientHandle::new(z.clone(), b.clone())?;
    let e_alt = SubquotientHandle::new(a.clone(), g.clone())?;
    Ok(PageCell { z, b, a, g, e, e_alt })
}

fn build_limit(fc: &FilteredComplexState, p: usize, q: usize) -> Result<LimitCell> {
    let n = p + q;
    let next = fc.level(p as i64 + 1, n);
    let z = fc.level_cocycles(p as i64, n).sum(next)?;
    let b = fc.level_coboundaries(p as i64, n).sum(next)?;
    let e = SubquotientHandle::new(z.clone(), b.clone())?;
    Ok(LimitCell { z, b, e })
}

/// A representative in `F_p C(r)` of the class of `z ∈ Z_r`.
fn truncated_representative(solver: &SpanSolver, a_dim: usize, a: &SubspaceHandle, z: &SparseVec) -> SparseVec {
    let coeffs = solver.solve(z).expect("Z_r = F_p C(r) + F_{p+1} C");
    let head = SparseVec::from_entries(coeffs.iter().filter(|(i, _)| *i < a_dim).map(|(i, x)| (i, x.clone())));
    a.combine(&head)
}

fn differentials(fc: &FilteredComplexState, r: usize, cells: &BTreeMap<(usize, usize), PageCell>) -> Result<BTreeMap<(usize, usize), RationalMatrix>> {
    let keys: Vec<(usize, usize)> = cells.keys().copied().collect();
    let out: Vec<Result<((usize, usize), RationalMatrix)>> = keys
        .par_iter()
        .map(|&(p, q)| {
            let cell = &cells[&(p, q)];
            let n = p + q;
            let target = (q + 1).checked_sub(r).map(|tq| (p + r, tq)).filter(|k| cells.contains_key(k));
            let Some(tk) = target else {
                // Outside the grid the image lies in F_{p+r} C^{n+1} = 0.
                return Ok(((p, q), RationalMatrix::zeros(0, cell.e.dim())));
            };
            let tcell = &cells[&tk];
            let solver = (r >= 2).then(|| {
                let next = fc.level(p as i64 + 1, n);
                SpanSolver::new(cell.a.basis().iter().chain(next.basis()))
            });
            let mut cols = Vec::with_capacity(cell.e.dim());
            for z in cell.e.representatives() {
                let rep = match &solver {
                    Some(s) => truncated_representative(s, cell.a.dim(), &cell.a, z),
                    None => z.clone(),
                };
                let dz = fc.complex().apply_d(n, &rep);
                let c = tcell
                    .e
                    .coords(&dz)
                    .map_err(|_| HscError::NotWellDefined(format!("d_{r} of a class in ({p},{q}) leaves Z_{r}")))?;
                cols.push(c);
            }
            Ok(((p, q), RationalMatrix::from_columns(tcell.e.dim(), cols)))
        })
        .collect();
    out.into_iter().collect()
}

impl PageState {
    /// Computes pages until the sequence degenerates (and at least through `E_2`),
    /// or through `max_r` when given.
    pub fn compute(fc: &FilteredComplexState, max_r: Option<usize>) -> Result<Self> {
        let top = fc.top_degree();
        let keys = grid(top);
        let limit: Vec<Result<((usize, usize), LimitCell)>> =
            keys.par_iter().map(|&(p, q)| build_limit(fc, p, q).map(|c| ((p, q), c))).collect();
        let limit: BTreeMap<_, _> = limit.into_iter().collect::<Result<_>>()?;
        let cap = max_r.unwrap_or(top + 2);
        let mut pages = Vec::new();
        let mut degeneration_page = None;
        for r in 0..=cap {
            let cells: Vec<Result<((usize, usize), PageCell)>> =
                keys.par_iter().map(|&(p, q)| build_cell(fc, r, p, q).map(|c| ((p, q), c))).collect();
            let cells: BTreeMap<_, _> = cells.into_iter().collect::<Result<_>>()?;
            let differentials = differentials(fc, r, &cells)?;
            let done = cells.iter().all(|(k, c)| c.z == limit[k].z && c.b == limit[k].b);
            if done && degeneration_page.is_none() {
                degeneration_page = Some(r);
            }
            pages.push(Page { r, cells, differentials });
            if done && r >= 2 && max_r.is_none() {
                break;
            }
        }
        Ok(PageState { top, pages, limit, degeneration_page })
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    /// A representative in `F_p C(r)` of the `E_r^{pq}` class with page coordinates `c`.
    pub fn truncated_class_rep(&self, fc: &FilteredComplexState, r: usize, p: usize, q: usize, c: &SparseVec) -> Option<SparseVec> {
        let cell = self.page(r)?.cell(p, q)?;
        let z = cell.e.representative(c);
        if r <= 1 {
            return Some(z);
        }
        let next = fc.level(p as i64 + 1, p + q);
        let solver = SpanSolver::new(cell.a.basis().iter().chain(next.basis()));
        Some(truncated_representative(&solver, cell.a.dim(), &cell.a, &z))
    }

    /// Number of computed pages.
    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r)
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn dim(&self, r: usize, p: usize, q: usize) -> usize {
        self.page(r).map_or(0, |pg| pg.dim(p, q))
    }

    pub fn limit(&self, p: usize, q: usize) -> Option<&LimitCell> {
        self.limit.get(&(p, q))
    }

    pub fn limit_dim(&self, p: usize, q: usize) -> usize {
        self.limit(p, q).map_or(0, |c| c.e.dim())
    }

    /// Smallest computed `r` with `Z_r = Z_∞` and `B_r = B_∞` everywhere.
    pub fn degeneration_page(&self) -> Option<usize> {
        self.degeneration_page
    }

    /// Degeneration at `E_r` in the monotone sense: all `d_s`, `s ≥ r`, vanish.
    pub fn degenerates_at(&self, r: usize) -> bool {
        self.degeneration_page.is_some_and(|d| d <= r)
    }

    pub fn summary(&self) -> PageSummary {
        let top = self.top;
        let dims = self
            .pages
            .iter()
            .map(|pg| (0..=top).map(|p| (0..=top - p).map(|q| pg.dim(p, q)).collect()).collect())
            .collect();
        let mut differential_ranks = Vec::new();
        for pg in &self.pages {
            for (&(p, q), m) in &pg.differentials {
                let rk = rank(m);
                if rk > 0 {
                    differential_ranks.push((pg.r, p, q, rk));
                }
            }
        }
        let infinity_dims = (0..=top).map(|p| (0..=top - p).map(|q| self.limit_dim(p, q)).collect()).collect();
        PageSummary { top_degree: top, dims, differential_ranks, infinity_dims, degeneration_page: self.degeneration_page }
    }

    /// Inclusions `B_r ⊆ B_{r+1} ⊆ B_∞ ⊆ Z_∞ ⊆ Z_{r+1} ⊆ Z_r`.
    pub fn check_inclusions(&self) -> Vec<String> {
        let mut out = Vec::new();
        for pg in &self.pages {
            for (&(p, q), c) in &pg.cells {
                let lim = &self.limit[&(p, q)];
                let checks = [
                    (c.z.contains(&lim.z), "Z_∞ ⊄ Z_r"),
                    (lim.z.contains(&lim.b), "B_∞ ⊄ Z_∞"),
                    (lim.b.contains(&c.b), "B_r ⊄ B_∞"),
                ];
                for (ok, what) in checks {
                    if !ok.unwrap_or(false) {
                        out.push(format!("r={} ({p},{q}): {what}", pg.r));
                    }
                }
                if let Some(next) = self.pages.get(pg.r + 1).and_then(|n| n.cell(p, q)) {
                    if !c.z.contains(&next.z).unwrap_or(false) || !next.b.contains(&c.b).unwrap_or(false) {
                        out.push(format!("r={} ({p},{q}): pages are not nested", pg.r));
                    }
                }
            }
        }
        out
    }

    /// `d_r ∘ d_r = 0`.
    pub fn check_square_zero(&self) -> Vec<String> {
        let mut out = Vec::new();
        for pg in &self.pages {
            for (&(p, q), m) in &pg.differentials {
                if let Some((tp, tq)) = pg.target(p, q) {
                    if pg.target(tp, tq).is_some() {
                        let m2 = pg.differential(tp, tq);
                        if !m2.mul(m).is_zero() {
                            out.push(format!("d_{} ∘ d_{} ≠ 0 at ({p},{q})", pg.r, pg.r));
                        }
                    }
                }
            }
        }
        out
    }

    /// For `r ≤ 1` both presentations coincide; for all `r` the inclusion
    /// `F_p C(r) / G_r → Z_r / B_r` is an isomorphism.
    pub fn check_presentations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for pg in &self.pages {
            for (&(p, q), c) in &pg.cells {
                if pg.r <= 1 && (c.a != c.z || c.g != c.b) {
                    out.push(format!("r={} ({p},{q}): presentations differ", pg.r));
                }
                match induced_map_with(|v| v.clone(), &c.e_alt, &c.e) {
                    Ok(m) if m.rows() == m.cols() && rank(&m) == m.cols() => {}
                    _ => out.push(format!("r={} ({p},{q}): F_p C(r)/G_r → Z_r/B_r is not an isomorphism", pg.r)),
                }
            }
        }
        out
    }

    /// The preimage of `ker d_r` is `Z_{r+1}` and the preimage of `im d_r` is `B_{r+1}`.
    pub fn check_next_page(&self) -> Vec<String> {
        let mut out = Vec::new();
        for w in self.pages.windows(2) {
            let (pg, next) = (&w[0], &w[1]);
            for (&(p, q), c) in &pg.cells {
                let ker = kernel_basis(pg.differential(p, q));
                let lifted: Vec<SparseVec> = ker.basis().iter().map(|k| c.e.representative(k)).collect();
                let zk = SubspaceHandle::span(c.z.ambient_dim(), lifted.iter()).sum(&c.b).unwrap();
                if zk != next.cells[&(p, q)].z {
                    out.push(format!("r={} ({p},{q}): preimage of ker d_r ≠ Z_(r+1)", pg.r));
                }
                let source = p.checked_sub(pg.r).zip((q + pg.r).checked_sub(1)).filter(|k| pg.cells.contains_key(k));
                let mut im = c.b.clone();
                if let Some((sp, sq)) = source {
                    let m = pg.differential(sp, sq);
                    let imgs: Vec<SparseVec> = m.columns().iter().map(|col| c.e.representative(col)).collect();
                    im = SubspaceHandle::span(c.z.ambient_dim(), imgs.iter()).sum(&c.b).unwrap();
                }
                if im != next.cells[&(p, q)].b {
                    out.push(format!("r={} ({p},{q}): preimage of im d_r ≠ B_(r+1)", pg.r));
                }
            }
        }
        out
    }

    /// `gr^p H^n ≅ E_∞^{p, n−p}` through `F_p Z → Z_∞`, and `Σ_p dim E_∞^{p,n−p} = dim H^n`.
    pub fn check_convergence(&self, fc: &FilteredComplexState) -> Vec<String> {
        let mut out = Vec::new();
        for n in 0..=self.top {
            let h = fc.cocycles(n).dim() - fc.coboundaries(n).dim();
            let total: usize = (0..=n).map(|p| self.limit_dim(p, n - p)).sum();
            if total != h {
                out.push(format!("degree {n}: Σ dim E_∞ = {total} but dim H = {h}"));
            }
            for p in 0..=n {
                let top = fc.level_cocycles(p as i64, n);
                let bottom = fc
                    .level_coboundaries(p as i64, n)
                    .sum(&fc.level_cocycles(p as i64 + 1, n))
                    .unwrap();
                let gr = SubquotientHandle::new(top, bottom).unwrap();
                match induced_map_with(|v| v.clone(), &gr, &self.limit[&(p, n - p)].e) {
                    Ok(m) if m.rows() == m.cols() && rank(&m) == m.cols() => {}
                    _ => out.push(format!("gr^{p} H^{n} → E_∞^({p},{}) is not an isomorphism", n - p)),
                }
            }
        }
        out
    }
}
