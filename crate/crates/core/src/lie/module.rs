use super::algebra::{LieAlgebraData, ValidationReport, Violation};
use crate::error::{HscError, Result};
use crate::linalg::{RationalMatrix, SparseVec};

/// A finite-dimensional module: one action matrix `ρ(e_i)` per basis vector of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModuleData {
    dim: usize,
    action: Vec<RationalMatrix>,
}

impl LieModuleData {
    pub fn new(dim: usize, action: Vec<RationalMatrix>) -> Result<Self> {
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(HscError::InvalidModule(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(LieModuleData { dim, action })
    }

    /// The trivial module `ℚ^dim` over an algebra of dimension `g_dim`.
    pub fn trivial(g_dim: usize, dim: usize) -> Self {
        LieModuleData { dim, action: vec![RationalMatrix::zeros(dim, dim); g_dim] }
    }

    pub fn adjoint(g: &LieAlgebraData) -> Self {
        LieModuleData { dim: g.dim(), action: (0..g.dim()).map(|i| g.ad_basis(i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra_dim(&self) -> usize {
        self.action.len()
    }

    /// `ρ(e_i)`.
    pub fn action(&self, i: usize) -> &RationalMatrix {
        &self.action[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.action.iter().all(|m| m.is_zero())
    }

    /// `ρ(x)` for a general algebra element.
    pub fn action_of(&self, x: &SparseVec) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.dim, self.dim);
        for (i, c) in x.iter() {
            out = out.add(&self.action[i].scale(c));
        }
        out
    }

    /// The same module over the algebra with basis given by the columns of `p`.
    pub fn rebase(&self, p: &RationalMatrix) -> LieModuleData {
        LieModuleData { dim: self.dim, action: p.columns().iter().map(|c| self.action_of(c)).collect() }
    }

    /// Restriction to the subalgebra with the given basis.
    pub fn restrict(&self, basis: &[SparseVec]) -> LieModuleData {
        LieModuleData { dim: self.dim, action: basis.iter().map(|c| self.action_of(c)).collect() }
    }

    /// The module pulled back along `e_i ↦ images[i]` (images in the algebra this
    /// module is defined over).
    pub fn pullback(&self, images: &[SparseVec]) -> LieModuleData {
        self.restrict(images)
    }
}

/// Checks `ρ([e_i, e_j]) = ρ(e_i)ρ(e_j) − ρ(e_j)ρ(e_i)` on all basis pairs.
pub fn validate_module(g: &LieAlgebraData, m: &LieModuleData) -> ValidationReport {
    let mut violations = Vec::new();
    if m.algebra_dim() != g.dim() {
        violations.push(Violation::Shape {
            detail: format!("{} action matrices for an algebra of dimension {}", m.algebra_dim(), g.dim()),
        });
        return ValidationReport { violations };
    }
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let lhs = m.action_of(g.bracket_basis(i, j));
            let rhs = m.action(i).mul(m.action(j)).sub(&m.action(j).mul(m.action(i)));
            if lhs != rhs {
                violations.push(Violation::ModuleBracket { i, j });
            }
        }
    }
    ValidationReport { violations }
}

/// A bilinear map `M ⊗ N → P`, stored as the image of each pair of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePairing {
    pub src1: LieModuleData,
    pub src2: LieModuleData,
    pub dst: LieModuleData,
    table: Vec<SparseVec>,
}

impl ModulePairing {
    pub fn new(src1: LieModuleData, src2: LieModuleData, dst: LieModuleData, table: Vec<SparseVec>) -> Result<Self> {
        if table.len() != src1.dim() * src2.dim() {
            return Err(HscError::PairingShape(format!(
                "expected {} table entries, found {}",
                src1.dim() * src2.dim(),
                table.len()
            )));
        }
        if table.iter().any(|v| v.max_index().is_some_and(|i| i >= dst.dim())) {
            return Err(HscError::PairingShape("pairing value outside the target module".into()));
        }
        Ok(ModulePairing { src1, src2, dst, table })
    }

    /// Multiplication `ℚ ⊗ ℚ → ℚ` on trivial one-dimensional modules.
    pub fn trivial(g_dim: usize) -> Self {
        let t = LieModuleData::trivial(g_dim, 1);
        ModulePairing { src1: t.clone(), src2: t.clone(), dst: t, table: vec![SparseVec::unit(0)] }
    }

    /// Scalar action `ℚ ⊗ M → M`.
    pub fn scalar_left(m: &LieModuleData) -> Self {
        let t = LieModuleData::trivial(m.algebra_dim(), 1);
        ModulePairing { src1: t, src2: m.clone(), dst: m.clone(), table: (0..m.dim()).map(SparseVec::unit).collect() }
    }

    /// `pairing(e_a, e_b)`.
    pub fn pair_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.table[a * self.src2.dim() + b]
    }

    pub fn pair(&self, m: &SparseVec, n: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, x) in m.iter() {
            for (b, y) in n.iter() {
                out = out.axpy(&(x * y), self.pair_basis(a, b));
            }
        }
        out
    }

    /// Failures of `x·pair(m, n) = pair(x·m, n) + pair(m, x·n)` over basis vectors.
    pub fn equivariance_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.src1.algebra_dim() {
            for a in 0..self.src1.dim() {
                for b in 0..self.src2.dim() {
                    let lhs = self.dst.action(x).apply(self.pair_basis(a, b));
                    let xa = self.src1.action(x).column(a);
                    let xb = self.src2.action(x).column(b);
                    let rhs = self.pair(xa, &SparseVec::unit(b)).add(&self.pair(&SparseVec::unit(a), xb));
                    if lhs != rhs {
                        out.push((x, a, b));
                    }
                }
            }
        }
        out
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariance_failures().is_empty()
    }

    /// The same pairing with all modules rebased along `p`.
    pub fn rebase(&self, p: &RationalMatrix) -> ModulePairing {
        ModulePairing {
            src1: self.src1.rebase(p),
            src2: self.src2.rebase(p),
            dst: self.dst.rebase(p),
            table: self.table.clone(),
        }
    }
}

impl Default for ModulePairing {
    fn default() -> Self {
        Self::trivial(0)
    }
}
