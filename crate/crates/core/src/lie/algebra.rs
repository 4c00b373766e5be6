use serde::{Deserialize, Serialize};

use crate::error::{HscError, Result};
use crate::linalg::{RationalMatrix, SparseVec, SubspaceHandle};
use crate::rational::Rational;

/// A finite-dimensional Lie algebra over ℚ given by structure constants
/// `[e_i, e_j] = Σ_k c_ij^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    table: Vec<SparseVec>,
    labels: Option<Vec<String>>,
}

/// One failed identity found by [`validate_algebra`] or [`crate::lie::validate_module`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `[e_i, e_i] ≠ 0`.
    Diagonal { i: usize },
    /// `[e_i, e_j] ≠ −[e_j, e_i]`.
    Antisymmetry { i: usize, j: usize },
    /// Jacobi identity fails on `(e_i, e_j, e_k)`.
    Jacobi { i: usize, j: usize, k: usize },
    /// `ρ([e_i, e_j]) ≠ [ρ(e_i), ρ(e_j)]`.
    ModuleBracket { i: usize, j: usize },
    /// Wrong number or shape of action matrices.
    Shape { detail: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LieAlgebraData {
    /// The zero bracket on `ℚ^dim`.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebraData { dim, table: vec![SparseVec::new(); dim * dim], labels: None }
    }

    /// Builds from the brackets `[e_i, e_j]` for listed pairs; a pair listed in one
    /// order only has its reverse filled in by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: impl IntoIterator<Item = (usize, usize, SparseVec)>) -> Result<Self> {
        let mut table = vec![SparseVec::new(); dim * dim];
        let mut given = vec![false; dim * dim];
        for (i, j, v) in brackets {
            if i >= dim || j >= dim || v.max_index().is_some_and(|m| m >= dim) {
                return Err(HscError::InvalidAlgebra(format!("bracket index out of range in [e{}, e{}]", i + 1, j + 1)));
            }
            if given[i * dim + j] {
                return Err(HscError::InvalidAlgebra(format!("bracket [e{}, e{}] given twice", i + 1, j + 1)));
            }
            given[i * dim + j] = true;
            table[i * dim + j] = v;
        }
        for i in 0..dim {
            for j in 0..dim {
                if given[i * dim + j] && !given[j * dim + i] {
                    table[j * dim + i] = table[i * dim + j].scale(&Rational::from_int(-1));
                }
            }
        }
        Ok(LieAlgebraData { dim, table, labels: None })
    }

    /// Integer structure constants `(i, j, [(k, c)])`.
    pub fn from_int_constants(dim: usize, consts: &[(usize, usize, &[(usize, i64)])]) -> Result<Self> {
        Self::from_brackets(
            dim,
            consts
                .iter()
                .map(|(i, j, v)| (*i, *j, SparseVec::from_entries(v.iter().map(|&(k, c)| (k, Rational::from_int(c)))))),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    /// `sl₂` in the basis `(h, e, f)`.
    pub fn sl2() -> Self {
        Self::from_int_constants(3, &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])])
            .unwrap()
            .with_labels(vec!["h".into(), "e".into(), "f".into()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let br = self.bracket_basis(i, j);
                if !br.is_zero() {
                    out = out.axpy(&(a * b), br);
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    /// Matrix of `ad(e_i)`.
    pub fn ad_basis(&self, i: usize) -> RationalMatrix {
        RationalMatrix::from_columns(self.dim, (0..self.dim).map(|j| self.bracket_basis(i, j).clone()).collect())
    }

    pub fn ad(&self, x: &SparseVec) -> RationalMatrix {
        RationalMatrix::from_columns(self.dim, (0..self.dim).map(|j| self.bracket(x, &SparseVec::unit(j))).collect())
    }

    /// Nonzero brackets `(a, b, [e_a, e_b])` with `a < b`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> + '_ {
        (0..self.dim).flat_map(move |a| {
            (a + 1..self.dim).filter_map(move |b| {
                let v = self.bracket_basis(a, b);
                (!v.is_zero()).then_some((a, b, v))
            })
        })
    }

    /// Structure constants in a new basis whose vectors are the columns of `p`
    /// (written in the current basis). `p` must be invertible.
    pub fn rebase(&self, p: &RationalMatrix) -> Result<LieAlgebraData> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(HscError::InvalidAlgebra("change of basis has the wrong shape".into()));
        }
        let solver = crate::linalg::SpanSolver::new(p.columns().iter());
        if solver.rank() != n {
            return Err(HscError::InvalidAlgebra("change of basis is singular".into()));
        }
        let mut table = vec![SparseVec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if j < i {
                    table[i * n + j] = table[j * n + i].scale(&Rational::from_int(-1));
                    continue;
                }
                let br = self.bracket(p.column(i), p.column(j));
                table[i * n + j] = solver.solve(&br).expect("full rank");
            }
        }
        Ok(LieAlgebraData { dim: n, table, labels: None })
    }

    /// Direct sum `self ⊕ other` with `self`'s basis first.
    pub fn direct_sum(&self, other: &LieAlgebraData) -> LieAlgebraData {
        let n = self.dim + other.dim;
        let mut table = vec![SparseVec::new(); n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                table[i * n + j] = self.bracket_basis(i, j).clone();
            }
        }
        let s = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                table[(s + i) * n + s + j] = other.bracket_basis(i, j).remap(|k| Some(k + s));
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(
                a.iter().map(|x| format!("({x},0)")).chain(b.iter().map(|y| format!("(0,{y})"))).collect(),
            ),
            _ => None,
        };
        LieAlgebraData { dim: n, table, labels }
    }

    /// Whether the span of `basis` is closed under the bracket.
    pub fn is_subalgebra(&self, sub: &SubspaceHandle) -> bool {
        let b = sub.basis();
        for (x, u) in b.iter().enumerate() {
            for v in &b[x + 1..] {
                if !sub.contains_vector(&self.bracket(u, v)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, sub: &SubspaceHandle) -> bool {
        sub.basis()
            .iter()
            .all(|v| (0..self.dim).all(|i| sub.contains_vector(&self.bracket(&SparseVec::unit(i), v))))
    }

    /// The algebra structure on a subalgebra in the given basis, which must span a subalgebra.
    pub fn restrict(&self, basis: &[SparseVec]) -> Result<LieAlgebraData> {
        let solver = crate::linalg::SpanSolver::new(basis.iter());
        if solver.rank() != basis.len() {
            return Err(HscError::InvalidAlgebra("restriction basis is dependent".into()));
        }
        let d = basis.len();
        let mut consts = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let br = self.bracket(&basis[i], &basis[j]);
                let c = solver
                    .solve(&br)
                    .ok_or_else(|| HscError::NotSubalgebra { what: "restriction basis".into() })?;
                consts.push((i, j, c));
            }
        }
        Self::from_brackets(d, consts)
    }
}

/// Checks antisymmetry and the Jacobi identity on all basis pairs and triples.
pub fn validate_algebra(g: &LieAlgebraData) -> ValidationReport {
    let n = g.dim();
    let mut violations = Vec::new();
    for i in 0..n {
        if !g.bracket_basis(i, i).is_zero() {
            violations.push(Violation::Diagonal { i });
        }
        for j in i + 1..n {
            if g.bracket_basis(i, j).add(g.bracket_basis(j, i)) != SparseVec::new() {
                violations.push(Violation::Antisymmetry { i, j });
            }
        }
    }
    let e = |i: usize| SparseVec::unit(i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = g.bracket(&e(i), g.bracket_basis(j, k));
                let b = g.bracket(&e(j), g.bracket_basis(k, i));
                let c = g.bracket(&e(k), g.bracket_basis(i, j));
                if !a.add(&b).add(&c).is_zero() {
                    violations.push(Violation::Jacobi { i, j, k });
                }
            }
        }
    }
    ValidationReport { violations }
}
