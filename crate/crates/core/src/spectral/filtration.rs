use std::collections::HashMap;
use std::sync::Mutex;

use crate::cochains::{Cochain, RelativeComplex};
use crate::error::Result;
use crate::lie::{LieModuleData, TripleData};
use crate::linalg::{SparseVec, SubspaceHandle};

/// The relative complex `C(g, k; M)` of a triple in adapted coordinates, with
/// the Hochschild-Serre filtration by the number of arguments in the ideal.
///
/// `F_p C^n` consists of the cochains whose coefficients vanish on every tuple
/// with more than `n − p` ideal indices. Negative `p` gives `F_0`.
#[derive(Debug)]
pub struct FilteredComplexState {
    triple: TripleData,
    module: LieModuleData,
    complex: RelativeComplex,
    ideal_mask: u64,
    /// `levels[n][p]` for `0 ≤ p ≤ n + 1`.
    levels: Vec<Vec<SubspaceHandle>>,
    cocycles: Vec<SubspaceHandle>,
    coboundaries: Vec<SubspaceHandle>,
    truncated: Mutex<HashMap<(i64, usize, i64), SubspaceHandle>>,
}

impl FilteredComplexState {
    /// `module` is given over the original basis of the triple's algebra.
    pub fn new(triple: &TripleData, module: &LieModuleData) -> Result<Self> {
        let adapted_module = triple.rebase_module(module);
        Self::from_adapted(triple, adapted_module)
    }

    /// As [`FilteredComplexState::new`] with the module already over the adapted basis.
    pub fn from_adapted(triple: &TripleData, module: LieModuleData) -> Result<Self> {
        let complex = RelativeComplex::new(&triple.pair(), &module)?;
        let di = triple.blocks().ideal();
        let ideal_mask = if di == 0 { 0 } else { (1u64 << di) - 1 };
        let levels = (0..=complex.top_degree())
            .map(|n| {
                let frame = complex.frame(n);
                (0..=n + 1)
                    .map(|p| {
                        let allowed = n as i64 - p as i64;
                        complex
                            .space(n)
                            .restrict_zero(|idx| ((frame.entry(idx).0 & ideal_mask).count_ones() as i64) > allowed)
                    })
                    .collect()
            })
            .collect();
        let cocycles = (0..=complex.top_degree()).map(|n| complex.cocycles(n)).collect();
        let coboundaries = (0..=complex.top_degree()).map(|n| complex.coboundaries(n)).collect();
        Ok(FilteredComplexState {
            triple: triple.clone(),
            module,
            complex,
            ideal_mask,
            levels,
            cocycles,
            coboundaries,
            truncated: Mutex::new(HashMap::new()),
        })
    }

    pub fn triple(&self) -> &TripleData {
        &self.triple
    }

    /// The module over the adapted basis.
    pub fn module(&self) -> &LieModuleData {
        &self.module
    }

    pub fn complex(&self) -> &RelativeComplex {
        &self.complex
    }

    pub fn top_degree(&self) -> usize {
        self.complex.top_degree()
    }

    /// Bit mask of the ideal's adapted indices.
    pub fn ideal_mask(&self) -> u64 {
        self.ideal_mask
    }

    /// Coordinate length of degree `n`.
    pub fn len(&self, n: usize) -> usize {
        self.complex.frame(n).len()
    }

    pub fn ideal_count(&self, mask: u64) -> usize {
        (mask & self.ideal_mask).count_ones() as usize
    }

    /// `F_p C^n`.
    pub fn level(&self, p: i64, n: usize) -> &SubspaceHandle {
        let row = &self.levels[n];
        let idx = p.clamp(0, n as i64 + 1) as usize;
        &row[idx]
    }

    /// `Z^n`.
    pub fn cocycles(&self, n: usize) -> &SubspaceHandle {
        &self.cocycles[n]
    }

    /// `B^n`.
    pub fn coboundaries(&self, n: usize) -> &SubspaceHandle {
        &self.coboundaries[n]
    }

    /// `F_p Z^n`.
    pub fn level_cocycles(&self, p: i64, n: usize) -> SubspaceHandle {
        self.level(p, n).intersection(&self.cocycles[n]).expect("same ambient")
    }

    /// `F_p B^n`.
    pub fn level_coboundaries(&self, p: i64, n: usize) -> SubspaceHandle {
        self.level(p, n).intersection(&self.coboundaries[n]).expect("same ambient")
    }

    /// `F_p C^n(r) = { c ∈ F_p C^n : dc ∈ F_{p+r} C^{n+1} }`.
    pub fn truncated(&self, p: i64, n: usize, r: i64) -> SubspaceHandle {
        if r <= 0 || n >= self.top_degree() {
            return self.level(p, n).clone();
        }
        // Below zero only p + r matters.
        let p = p.max(-r);
        let key = (p, n, r);
        if let Some(s) = self.truncated.lock().unwrap().get(&key) {
            return s.clone();
        }
        let target = self.level(p + r, n + 1);
        let s = self.level(p, n).preimage(|v| self.complex.apply_d(n, v), target);
        self.truncated.lock().unwrap().insert(key, s.clone());
        s
    }

    /// The largest `p` with `v ∈ F_p C^n`, or `n + 1` for `v = 0`.
    pub fn filtration_level(&self, n: usize, v: &SparseVec) -> usize {
        let frame = self.complex.frame(n);
        let worst = v.iter().map(|(i, _)| self.ideal_count(frame.entry(i).0)).max();
        worst.map_or(n + 1, |w| n - w)
    }

    /// As [`FilteredComplexState::filtration_level`] for a cochain over the adapted basis.
    pub fn cochain_level(&self, c: &Cochain) -> usize {
        let n = c.degree();
        c.terms().map(|(mask, _, _)| n - self.ideal_count(mask)).min().unwrap_or(n + 1)
    }

    /// Checks `F_0 = C`, monotonicity, vanishing above `n` and `d F_p ⊆ F_p`.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        for n in 0..=self.top_degree() {
            if self.level(0, n) != self.complex.space(n) {
                out.push(format!("F_0 C^{n} ≠ C^{n}"));
            }
            if !self.level(n as i64 + 1, n).is_zero() {
                out.push(format!("F_{} C^{n} ≠ 0", n + 1));
            }
            for p in 0..=n as i64 {
                if !self.level(p, n).contains(self.level(p + 1, n)).unwrap() {
                    out.push(format!("F_{} C^{n} ⊄ F_{p} C^{n}", p + 1));
                }
                if n < self.top_degree() {
                    let target = self.level(p, n + 1);
                    if !self.level(p, n).basis().iter().all(|v| target.contains_vector(&self.complex.apply_d(n, v))) {
                        out.push(format!("d F_{p} C^{n} ⊄ F_{p} C^{}", n + 1));
                    }
                }
            }
        }
        out
    }
}
