use std::collections::BTreeMap;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;

use super::filtration::FilteredComplexState;
use super::sample_indices;
use crate::cochains::frame::{binomial, bits, count_below, sign};
use crate::cochains::{joint_theta_kernel, CeOperators, Cochain, Frame, RelativeComplex};
use crate::error::{HscError, Result};
use crate::lie::LieModuleData;
use crate::linalg::{RationalMatrix, SparseVec, SubquotientHandle, SubspaceHandle};
use crate::rational::Rational;

/// `C^q(I; M)` as a `g`-module under `θ`, with its relative subspace and cohomology.
/// Coordinate bound for building `C(g, k; C^q(I; M))` in the stability check.
pub const STABILITY_COORD_LIMIT: usize = 200_000;

#[derive(Debug)]
pub struct ValueLevel {
    /// Cochains on all tuples of ideal indices.
    pub frame: Frame,
    /// `x ↦ θ_x`.
    pub module: LieModuleData,
    /// `x ↦ θ_{x⁺}`: the ideal acts by zero.
    pub plus_module: LieModuleData,
    pub ops: CeOperators,
    pub plus_ops: CeOperators,
    /// `C^q(I, I_k; M)`.
    pub relative: SubspaceHandle,
    /// The ideal's differential `C^q(I; M) → C^{q+1}(I; M)`.
    pub dv: RationalMatrix,
    /// `Z^q(I, I_k; M)`.
    pub cocycles: SubspaceHandle,
    /// `B^q(I, I_k; M)`.
    pub coboundaries: SubspaceHandle,
    /// `H^q(I, I_k; M)`.
    pub cohomology: SubquotientHandle,
}

/// `C^p(g/I, k/I_k; C^q(I, I_k; M))` inside the cochains on `p`-tuples of
/// `J_L` indices with values in `C^q(I; M)`.
#[derive(Debug)]
pub struct Target {
    pub frame: Frame,
    pub space: SubspaceHandle,
}

/// The double complex `C^p(g; C^q(I; M))` and the comparison maps between it and
/// the filtered relative complex, all in adapted coordinates.
#[derive(Debug)]
pub struct DoubleComplex {
    n: usize,
    ideal_dim: usize,
    ideal_mask: u64,
    jl: Vec<usize>,
    k_indices: Vec<usize>,
    g_ops: CeOperators,
    levels: Vec<ValueLevel>,
    targets: BTreeMap<(usize, usize), OnceLock<Target>>,
}

fn frame_unit(frame: &Frame, i: usize) -> Cochain {
    Cochain::from_coords(frame, &SparseVec::unit(i))
}

/// All submasks of `mask` with exactly `k` bits.
fn submasks(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    let b: Vec<usize> = bits(mask).collect();
    b.into_iter().combinations(k).map(|c| c.iter().fold(0u64, |m, &i| m | (1 << i)))
}

/// Sign of the shuffle that puts the arguments in `x` before those in `y`.
fn shuffle_sign(x: u64, y: u64) -> Rational {
    let inv: usize = bits(x).map(|a| count_below(y, a)).sum();
    Rational::from_int(sign(inv))
}

impl DoubleComplex {
    pub fn new(fc: &FilteredComplexState) -> Result<Self> {
        let triple = fc.triple();
        let blocks = triple.blocks();
        let n = blocks.total();
        let di = blocks.ideal();
        let ideal_mask = fc.ideal_mask();
        let g_ops = fc.complex().ops().clone();
        let module = fc.module();
        let ideal_pair = triple.ideal_pair();
        let units: Vec<SparseVec> = (0..di).map(SparseVec::unit).collect();
        let ideal_ops = CeOperators::new(&ideal_pair.algebra, &module.pullback(&units))?;
        let ideal_indices: Vec<usize> = (0..di).collect();
        let ik_indices: Vec<usize> = (0..blocks.ik).collect();
        let ik_mask = ik_indices.iter().fold(0u64, |m, &i| m | (1 << i));
        let dm = module.dim();

        let frames: Vec<Frame> = (0..=di + 1).map(|q| Frame::new(n, &ideal_indices, q, dm)).collect();
        let built: Vec<Result<(LieModuleData, SubspaceHandle, RationalMatrix)>> = (0..=di)
            .into_par_iter()
            .map(|q| {
                let (frame, m) = g_ops.cochain_module(&ideal_indices, q);
                debug_assert_eq!(frame, frames[q]);
                let avoid = (0..frame.len()).filter(|&i| frame.entry(i).0 & ik_mask == 0);
                let within = SubspaceHandle::coordinate(frame.len(), avoid);
                let relative = joint_theta_kernel(&g_ops, &frame, &ik_indices, &within);
                let next = &frames[q + 1];
                let cols = (0..frame.len())
                    .map(|i| {
                        ideal_ops
                            .differential(&frame_unit(&frame, i))
                            .to_coords(next)
                            .ok_or_else(|| HscError::NotWellDefined("ideal differential leaves the ideal".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((m, relative, RationalMatrix::from_columns(next.len(), cols)))
            })
            .collect();
        let built = built.into_iter().collect::<Result<Vec<_>>>()?;

        let mut levels = Vec::with_capacity(di + 1);
        for (q, (m, relative, dv)) in built.iter().enumerate() {
            let frame = frames[q].clone();
            let cocycles = relative.kernel_of(|v| dv.apply(v));
            let coboundaries = if q == 0 {
                SubspaceHandle::zero(frame.len())
            } else {
                built[q - 1].1.image(|v| built[q - 1].2.apply(v), frame.len())
            };
            let cohomology = SubquotientHandle::new(cocycles.clone(), coboundaries.clone())
                .map_err(|_| HscError::NotACocycle(format!("B^{q}(I, I_k; M) ⊄ Z^{q}(I, I_k; M)")))?;
            let zero = RationalMatrix::zeros(frame.len(), frame.len());
            let plus_actions = (0..n).map(|x| if x < di { zero.clone() } else { m.action(x).clone() }).collect();
            let plus_module = LieModuleData::new(frame.len(), plus_actions)?;
            let ops = CeOperators::new(triple.adapted(), m)?;
            let plus_ops = CeOperators::new(triple.adapted(), &plus_module)?;
            levels.push(ValueLevel {
                frame,
                module: m.clone(),
                plus_module,
                ops,
                plus_ops,
                relative: relative.clone(),
                dv: dv.clone(),
                cocycles,
                coboundaries,
                cohomology,
            });
        }

        let jl: Vec<usize> = (di + blocks.jk..n).collect();
        let mut targets = BTreeMap::new();
        for p in 0..=jl.len() + 1 {
            for q in 0..=di {
                targets.insert((p, q), OnceLock::new());
            }
        }
        Ok(DoubleComplex { n, ideal_dim: di, ideal_mask, jl, k_indices: blocks.k_indices(), g_ops, levels, targets })
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal_dim
    }

    /// Adapted indices of `J_L`, a basis of `g / (I + k)`.
    pub fn jl(&self) -> &[usize] {
        &self.jl
    }

    /// Largest `q` with `C^q(I, I_k; M) ≠ 0` possible.
    pub fn max_q(&self) -> usize {
        self.ideal_dim - self.k_indices.iter().filter(|&&i| i < self.ideal_dim).count()
    }

    pub fn max_p(&self) -> usize {
        self.jl.len()
    }

    pub fn level(&self, q: usize) -> &ValueLevel {
        &self.levels[q]
    }

    pub fn levels(&self) -> &[ValueLevel] {
        &self.levels
    }

    /// `C^p(g/I, k/I_k; C^q(I, I_k; M))`.
    pub fn target(&self, p: usize, q: usize) -> &Target {
        self.targets[&(p, q)].get_or_init(|| {
            let level = &self.levels[q];
            let vlen = level.frame.len();
            let frame = Frame::new(self.n, &self.jl, p, vlen);
            let mut gens = Vec::new();
            for r in 0..frame.num_masks() {
                for b in level.relative.basis() {
                    gens.push(SparseVec::from_sorted_unchecked(
                        b.iter().map(|(i, x)| (r * vlen + i, x.clone())).collect(),
                    ));
                }
            }
            let within = SubspaceHandle::span_owned(frame.len(), gens);
            let space = joint_theta_kernel(&level.ops, &frame, &self.k_indices, &within);
            Target { frame, space }
        })
    }

    /// `s_p: F_p C^{p+q} → C^p(C^q)` on a vector of the relative complex.
    pub fn s_map(&self, fc: &FilteredComplexState, p: usize, q: usize, v: &SparseVec) -> SparseVec {
        let big = fc.complex().frame(p + q);
        let t = self.target(p, q);
        let nq = &self.levels[q].frame;
        let s = Rational::from_int(sign(p * q));
        SparseVec::from_entries(v.iter().filter_map(|(idx, x)| {
            let (mask, m) = big.entry(idx);
            let qm = mask & self.ideal_mask;
            if qm.count_ones() as usize != q {
                return None;
            }
            let j = nq.index(qm, m).expect("ideal frame covers the ideal");
            let i = t.frame.index(mask & !self.ideal_mask, j).expect("relative tuples avoid k");
            Some((i, x * &s))
        }))
    }

    /// The lift `z ↦ z̃` into `F_p C^{p+q}`.
    pub fn lift(&self, fc: &FilteredComplexState, p: usize, q: usize, z: &SparseVec) -> Result<SparseVec> {
        let big = fc.complex().frame(p + q);
        let t = self.target(p, q);
        let nq = &self.levels[q].frame;
        let s = Rational::from_int(sign(p * q));
        let mut e = Vec::with_capacity(z.nnz());
        for (idx, x) in z.iter() {
            let (pm, j) = t.frame.entry(idx);
            let (qm, m) = nq.entry(j);
            let i = big
                .index(pm | qm, m)
                .ok_or_else(|| HscError::NotWellDefined("lifted value has an argument in I_k".into()))?;
            e.push((i, x * &s));
        }
        Ok(SparseVec::from_entries(e))
    }

    /// `d_v` on `C^p(C^q)`, applying the ideal's differential to each value.
    pub fn d_v(&self, p: usize, q: usize, z: &SparseVec) -> SparseVec {
        if q >= self.ideal_dim {
            return SparseVec::new();
        }
        let src = &self.target(p, q).frame;
        let dst = &self.target(p, q + 1).frame;
        let dv = &self.levels[q].dv;
        let mut out = Vec::new();
        for (idx, x) in z.iter() {
            let (pm, j) = src.entry(idx);
            let r = dst.mask_rank(pm).expect("same outer frame");
            for (j2, y) in dv.column(j).iter() {
                out.push((r * dst.module_dim() + j2, x * y));
            }
        }
        SparseVec::from_entries(out)
    }

    /// `d_+ z`: the Chevalley-Eilenberg differential of `g` acting on values by `θ_{x⁺}`.
    pub fn d_plus(&self, p: usize, q: usize, z: &SparseVec) -> Result<SparseVec> {
        let src = &self.target(p, q).frame;
        let dst = &self.target(p + 1, q).frame;
        let c = Cochain::from_coords(src, z);
        self.levels[q]
            .plus_ops
            .differential(&c)
            .to_coords(dst)
            .ok_or_else(|| HscError::NotWellDefined(format!("d_+ z is not relative at (p, q) = ({p}, {q})")))
    }

    /// `C^p(Z^q)`.
    pub fn cp_zq(&self, p: usize, q: usize) -> SubspaceHandle {
        self.target(p, q).space.kernel_of(|v| self.d_v(p, q, v))
    }

    /// `C^p(B^q)`.
    pub fn cp_bq(&self, p: usize, q: usize) -> SubspaceHandle {
        let t = self.target(p, q);
        let b = &self.levels[q].coboundaries;
        let vlen = self.levels[q].frame.len();
        let gens: Vec<SparseVec> = (0..t.frame.num_masks())
            .flat_map(|r| {
                b.basis().iter().map(move |v| {
                    SparseVec::from_sorted_unchecked(v.iter().map(|(i, x)| (r * vlen + i, x.clone())).collect())
                })
            })
            .collect();
        SubspaceHandle::span_owned(t.frame.len(), gens).intersection(&t.space).expect("same ambient")
    }

    /// `R_p: C^{p+q}(g; M) → C^p(g; C^q(I; M))` on absolute cochains; the
    /// result carries `C^q(I; M)` frame indices as module indices.
    pub fn r_map(&self, p: usize, q: usize, f: &Cochain) -> Cochain {
        let nq = &self.levels[q].frame;
        let mut out = Cochain::zero(p);
        for (t, m, x) in f.terms() {
            for y in submasks(t & self.ideal_mask, q) {
                let xm = t & !y;
                let j = nq.index(y, m).expect("ideal frame");
                out.add_term(xm, j, &(x * &shuffle_sign(xm, y)));
            }
        }
        out
    }

    /// `d_v` on `C^p(g; C^q(I; M))` in cochain form.
    pub fn d_v_cochain(&self, q: usize, f: &Cochain) -> Cochain {
        let dv = &self.levels[q].dv;
        let mut out = Cochain::zero(f.degree());
        for (t, j, x) in f.terms() {
            out.add_vector(t, x, dv.column(j));
        }
        out
    }

    /// `d_h` on `C^p(g; C^q(I; M))` in cochain form.
    pub fn d_h_cochain(&self, q: usize, f: &Cochain) -> Cochain {
        self.levels[q].ops.differential(f)
    }

    /// Degrees `(p, q)` with `p + q ≤ top` where the target can be nonzero.
    pub fn bidegrees(&self, top: usize) -> Vec<(usize, usize)> {
        (0..=top.min(self.max_p()))
            .flat_map(|p| (0..=(top - p).min(self.max_q())).map(move |q| (p, q)))
            .collect()
    }

    /// `ker s_p = F_{p+1}`, `im s_p = C^p(C^q)` and `s_p ∘ lift = id` with lifts in `F_p C^{p+q}`.
    pub fn check_restriction(&self, fc: &FilteredComplexState) -> Vec<String> {
        let top = fc.top_degree();
        let cells: Vec<Vec<String>> = (0..=top)
            .flat_map(|n| (0..=n).map(move |p| (p, n - p)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(p, q)| {
                let mut out = Vec::new();
                let n = p + q;
                let fp = fc.level(p as i64, n);
                let in_range = p <= self.max_p() && q <= self.max_q();
                if !in_range {
                    if fp != fc.level(p as i64 + 1, n) {
                        out.push(format!("({p},{q}): F_p ≠ F_(p+1) outside the target range"));
                    }
                    return out;
                }
                let t = self.target(p, q);
                let ker = fp.kernel_of(|v| self.s_map(fc, p, q, v));
                if &ker != fc.level(p as i64 + 1, n) {
                    out.push(format!("({p},{q}): ker s_p ≠ F_(p+1)"));
                }
                let im = fp.image(|v| self.s_map(fc, p, q, v), t.frame.len());
                if im != t.space {
                    out.push(format!("({p},{q}): im s_p (dim {}) ≠ C^p(C^q) (dim {})", im.dim(), t.space.dim()));
                }
                for z in t.space.basis() {
                    match self.lift(fc, p, q, z) {
                        Ok(l) => {
                            if !fp.contains_vector(&l) {
                                out.push(format!("({p},{q}): lift leaves F_p C^(p+q)"));
                                break;
                            }
                            if &self.s_map(fc, p, q, &l) != z {
                                out.push(format!("({p},{q}): s_p ∘ lift ≠ id"));
                                break;
                            }
                        }
                        Err(e) => {
                            out.push(format!("({p},{q}): {e}"));
                            break;
                        }
                    }
                }
                out
            })
            .collect();
        cells.into_iter().flatten().collect()
    }

    /// `s_p(dc) = (−1)^p d_v s_p(c)` for `c ∈ F_p C^{p+q}`.
    pub fn check_d0(&self, fc: &FilteredComplexState) -> Vec<String> {
        let mut out = Vec::new();
        let top = fc.top_degree();
        for n in 0..top {
            for p in 0..=n.min(self.max_p()) {
                let q = n - p;
                if q > self.max_q() || q + 1 > self.ideal_dim {
                    continue;
                }
                let s = Rational::from_int(sign(p));
                for c in fc.level(p as i64, n).basis() {
                    let lhs = self.s_map(fc, p, q + 1, &fc.complex().apply_d(n, c));
                    let rhs = self.d_v(p, q, &self.s_map(fc, p, q, c)).scale(&s);
                    if lhs != rhs {
                        out.push(format!("({p},{q}): s_p d ≠ (−1)^p d_v s_p"));
                        break;
                    }
                }
            }
        }
        out
    }

    /// `s_{p+1}(d z̃) = d_+ z` for `z ∈ C^p(Z^q)`.
    pub fn check_lift_differential(&self, fc: &FilteredComplexState) -> Vec<String> {
        let mut out = Vec::new();
        let top = fc.top_degree();
        for (p, q) in self.bidegrees(top) {
            if p + q >= top {
                continue;
            }
            for z in self.cp_zq(p, q).basis() {
                let lifted = match self.lift(fc, p, q, z) {
                    Ok(l) => l,
                    Err(e) => {
                        out.push(format!("({p},{q}): {e}"));
                        break;
                    }
                };
                let lhs = self.s_map(fc, p + 1, q, &fc.complex().apply_d(p + q, &lifted));
                match self.d_plus(p, q, z) {
                    Ok(rhs) if rhs == lhs => {}
                    Ok(_) => {
                        out.push(format!("({p},{q}): s_(p+1) d z̃ ≠ d_+ z"));
                        break;
                    }
                    Err(e) => {
                        out.push(format!("({p},{q}): {e}"));
                        break;
                    }
                }
            }
        }
        out
    }

    /// `d_h d_v = d_v d_h` on sampled basis elements of `C^p(g; C^q(I; M))`.
    pub fn check_commuting(&self, top: usize, limit: usize, seed: u64) -> Vec<String> {
        let mut out = Vec::new();
        for q in 0..self.ideal_dim {
            let vlen = self.levels[q].frame.len();
            for p in 0..=top.min(self.n - 1) {
                let frame = Frame::new(self.n, &(0..self.n).collect::<Vec<_>>(), p, vlen);
                for i in sample_indices(frame.len(), limit, seed ^ ((p * 64 + q) as u64)) {
                    let f = frame_unit(&frame, i);
                    let a = self.d_h_cochain(q + 1, &self.d_v_cochain(q, &f));
                    let b = self.d_v_cochain(q, &self.d_h_cochain(q, &f));
                    if a != b {
                        out.push(format!("({p},{q}): d_h d_v ≠ d_v d_h"));
                        break;
                    }
                }
            }
        }
        out
    }

    /// `R_{p+1} df = d_h R_p f + (−1)^{p+1} d_v R_{p+1} f` on sampled basis cochains of `C^{p+q}(g; M)`.
    pub fn check_restriction_differential(&self, top: usize, limit: usize, seed: u64) -> Vec<String> {
        let mut out = Vec::new();
        let all: Vec<usize> = (0..self.n).collect();
        let dm = self.g_ops.module().dim();
        for n in 0..top.min(self.n) {
            let frame = Frame::new(self.n, &all, n, dm);
            let picks = sample_indices(frame.len(), limit, seed ^ n as u64);
            for q in 0..=n.min(self.ideal_dim) {
                let p = n - q;
                for &i in &picks {
                    let f = frame_unit(&frame, i);
                    let lhs = self.r_map(p + 1, q, &self.g_ops.differential(&f));
                    let mut rhs = self.d_h_cochain(q, &self.r_map(p, q, &f));
                    if q > 0 {
                        let s = Rational::from_int(sign(p + 1));
                        rhs = rhs.add(&self.d_v_cochain(q - 1, &self.r_map(p + 1, q - 1, &f)).scale(&s));
                    }
                    if lhs != rhs {
                        out.push(format!("({p},{q}): R_(p+1) d ≠ d_h R_p + (−1)^(p+1) d_v R_(p+1)"));
                        break;
                    }
                }
            }
        }
        out
    }

    /// `C^p(C^q)` is stable under `d_v`; when every `C(g, k; C^q(I; M))` has at
    /// most [`STABILITY_COORD_LIMIT`] coordinates, those complexes are also
    /// checked for `d_h`- and `d_v`-stability.
    pub fn check_stability(&self, fc: &FilteredComplexState) -> Vec<String> {
        let mut out = Vec::new();
        let top = fc.top_degree();
        for (p, q) in self.bidegrees(top) {
            if q < self.ideal_dim {
                let next = &self.target(p, q + 1).space;
                if !self.target(p, q).space.basis().iter().all(|z| next.contains_vector(&self.d_v(p, q, z))) {
                    out.push(format!("({p},{q}): d_v leaves C^p(C^q)"));
                }
            }
        }
        let pair = fc.complex().pair();
        let free = pair.free_indices().len();
        let size = |m: usize| (0..=free).map(|p| binomial(free, p) * m).sum::<usize>();
        if self.levels.iter().any(|l| size(l.module.dim()) > STABILITY_COORD_LIMIT) {
            return out;
        }
        let complexes: Vec<Result<RelativeComplex>> =
            self.levels.par_iter().map(|l| RelativeComplex::new(pair, &l.module)).collect();
        let complexes = match complexes.into_iter().collect::<Result<Vec<_>>>() {
            Ok(c) => c,
            Err(e) => return vec![e.to_string()],
        };
        for (q, cx) in complexes.iter().enumerate() {
            if !cx.check_d_stable() {
                out.push(format!("q={q}: C(g, k; C^q(I; M)) is not d_h-stable"));
            }
            if let Some(next) = complexes.get(q + 1) {
                for p in 0..=cx.top_degree() {
                    let ok = cx.space(p).basis().iter().all(|v| {
                        let c = self.d_v_cochain(q, &cx.to_cochain(p, v));
                        next.from_cochain(&c).is_some_and(|w| next.space(p).contains_vector(&w))
                    });
                    if !ok {
                        out.push(format!("({p},{q}): C(g, k; C(I; M)) is not d_v-stable"));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_enumeration() {
        let v: Vec<u64> = submasks(0b1011, 2).collect();
        assert_eq!(v, vec![0b0011, 0b1001, 0b1010]);
        assert_eq!(submasks(0b1011, 0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn shuffle_signs() {
        assert_eq!(shuffle_sign(0b100, 0b011), Rational::from_int(1));
        assert_eq!(shuffle_sign(0b100, 0b001), Rational::from_int(-1));
        assert_eq!(shuffle_sign(0b001, 0b110), Rational::from_int(1));
    }
}
