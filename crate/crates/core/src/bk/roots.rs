use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HscError, Result};
use crate::lie::{validate_algebra, LieAlgebraData};
use crate::linalg::{RationalMatrix, SpanSolver, SparseVec};
use crate::rational::Rational;

/// Supported Cartan types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    B2,
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B2 => write!(f, "B2"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = HscError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B2" => Ok(CartanType::B2),
            "G2" => Ok(CartanType::G2),
            t if t.starts_with('A') => match t[1..].parse::<usize>() {
                Ok(n) if (1..=4).contains(&n) => Ok(CartanType::A(n)),
                _ => Err(HscError::UnsupportedType(s.to_string())),
            },
            _ => Err(HscError::UnsupportedType(s.to_string())),
        }
    }
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match self {
            CartanType::A(n) => *n,
            CartanType::B2 | CartanType::G2 => 2,
        }
    }
}

/// A root system with a Chevalley basis of the corresponding split Lie algebra.
///
/// The algebra basis is `h_1, …, h_n`, then `e_α` and then `f_α` for the
/// positive roots `α` in [`RootDatum::positive_roots`] order.
#[derive(Clone, Debug)]
pub struct RootDatum {
    kind: CartanType,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    cartan: Vec<Vec<i64>>,
    /// Positive roots as coefficient vectors over the simple roots, by height.
    positive: Vec<Vec<i64>>,
    algebra: LieAlgebraData,
}

fn unit_matrix(d: usize, entries: &[(usize, usize, i64)]) -> RationalMatrix {
    let mut rows = vec![vec![0i64; d]; d];
    for &(i, j, x) in entries {
        rows[i][j] += x;
    }
    RationalMatrix::from_int_rows(&rows)
}

/// Chevalley generators `(e_i, f_i)` in a faithful matrix representation.
fn generators(kind: CartanType) -> Vec<(RationalMatrix, RationalMatrix)> {
    match kind {
        CartanType::A(n) => (0..n)
            .map(|i| (unit_matrix(n + 1, &[(i, i + 1, 1)]), unit_matrix(n + 1, &[(i + 1, i, 1)])))
            .collect(),
        // so(5) for the antidiagonal form; α_1 long, α_2 short.
        CartanType::B2 => vec![
            (unit_matrix(5, &[(0, 1, 1), (3, 4, -1)]), unit_matrix(5, &[(1, 0, 1), (4, 3, -1)])),
            (unit_matrix(5, &[(1, 2, 1), (2, 3, -1)]), unit_matrix(5, &[(2, 1, 2), (3, 2, -2)])),
        ],
        // The 7-dimensional representation; α_1 short, α_2 long.
        CartanType::G2 => vec![
            (
                unit_matrix(7, &[(0, 1, 1), (2, 3, 2), (3, 4, 1), (5, 6, 1)]),
                unit_matrix(7, &[(1, 0, 1), (3, 2, 1), (4, 3, 2), (6, 5, 1)]),
            ),
            (unit_matrix(7, &[(1, 2, 1), (4, 5, 1)]), unit_matrix(7, &[(2, 1, 1), (5, 4, 1)])),
        ],
    }
}

fn bracket(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    a.mul(b).sub(&b.mul(a))
}

fn flatten(m: &RationalMatrix) -> SparseVec {
    let r = m.rows();
    SparseVec::from_entries(
        m.columns()
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, x)| (j * r + i, x.clone())).collect::<Vec<_>>()),
    )
}

/// The scalar `μ` with `a = μ b`, if any.
fn ratio(a: &SparseVec, b: &SparseVec) -> Option<Rational> {
    let (i, y) = b.leading()?;
    let mu = &a.get(i) / y;
    (b.scale(&mu) == *a).then_some(mu)
}

/// Positive roots generated from the Cartan matrix by root strings, ordered by
/// height and then lexicographically.
pub fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut roots = simple.clone();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..n {
            let mut p = 0;
            loop {
                let mut down = beta.clone();
                down[i] -= p + 1;
                if roots.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if !roots.contains(&up) {
                    roots.push(up);
                }
            }
        }
        idx += 1;
    }
    let height = |r: &Vec<i64>| r.iter().sum::<i64>();
    roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
    roots
}

fn root_label(r: &[i64]) -> String {
    let simple = r.iter().filter(|&&c| c != 0).count() == 1 && r.iter().sum::<i64>() == 1;
    if simple {
        format!("{}", r.iter().position(|&c| c == 1).unwrap() + 1)
    } else {
        format!("({})", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl RootDatum {
    pub fn new(kind: CartanType) -> Result<Self> {
        let gens = generators(kind);
        let n = gens.len();
        let hs: Vec<RationalMatrix> = gens.iter().map(|(e, f)| bracket(e, f)).collect();
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = ratio(&flatten(&bracket(&hs[i], &gens[j].0)), &flatten(&gens[j].0))
                    .and_then(|c| c.to_i64())
                    .ok_or_else(|| HscError::InvalidAlgebra(format!("generator e_{} is not an h-eigenvector", j + 1)))?;
                cartan[i][j] = c;
            }
        }
        // Symmetrizer d_i = (α_i, α_i)/2 with d_i a_ij = d_j a_ji.
        let mut d = vec![Rational::from_int(0); n];
        d[0] = Rational::from_int(1);
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..n {
                    if cartan[i][j] != 0 && !d[i].is_zero() && d[j].is_zero() {
                        d[j] = &(&d[i] * &Rational::from_int(cartan[i][j])) / &Rational::from_int(cartan[j][i]);
                        changed = true;
                    }
                }
            }
        }
        let positive = positive_roots(&cartan);
        let index: BTreeMap<Vec<i64>, usize> = positive.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();

        let mut e: Vec<RationalMatrix> = Vec::with_capacity(positive.len());
        let mut f: Vec<RationalMatrix> = Vec::with_capacity(positive.len());
        for xi in &positive {
            if let Some(i) = (0..n).find(|&i| xi.iter().enumerate().all(|(j, &c)| c == i64::from(i == j))) {
                e.push(gens[i].0.clone());
                f.push(gens[i].1.clone());
                continue;
            }
            // Extraspecial pair: the first simple root whose removal leaves a root.
            let (i, beta) = (0..n)
                .find_map(|i| {
                    let mut b = xi.clone();
                    b[i] -= 1;
                    index.get(&b).map(|&k| (i, k))
                })
                .expect("non-simple roots have a simple predecessor");
            let mut r = 0;
            loop {
                let mut b = positive[beta].clone();
                b[i] -= r + 1;
                if index.contains_key(&b) {
                    r += 1;
                } else {
                    break;
                }
            }
            let ex = bracket(&gens[i].0, &e[beta]).scale(&Rational::new(1, r + 1));
            let fx = bracket(&gens[i].1, &f[beta]);
            let norm: Rational = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| &d[a] * &Rational::from_int(xi[a] * xi[b] * cartan[a][b]))
                .sum();
            let coroot = (0..n).fold(RationalMatrix::zeros(hs[0].rows(), hs[0].cols()), |acc, a| {
                let k = &(&Rational::from_int(2 * xi[a]) * &d[a]) / &norm;
                acc.add(&hs[a].scale(&k))
            });
            let mu = ratio(&flatten(&bracket(&ex, &fx)), &flatten(&coroot))
                .filter(|m| !m.is_zero())
                .ok_or_else(|| HscError::InvalidAlgebra("[e_α, f_α] is not a multiple of the coroot".into()))?;
            e.push(ex);
            f.push(fx.scale(&mu.recip()));
        }

        let basis: Vec<RationalMatrix> = hs.iter().chain(&e).chain(&f).cloned().collect();
        let flat: Vec<SparseVec> = basis.iter().map(flatten).collect();
        let solver = SpanSolver::new(flat.iter());
        let dim = basis.len();
        if solver.rank() != dim {
            return Err(HscError::InvalidAlgebra("Chevalley basis is dependent".into()));
        }
        let mut consts = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let c = solver
                    .solve(&flatten(&bracket(&basis[a], &basis[b])))
                    .ok_or_else(|| HscError::InvalidAlgebra("Chevalley basis is not closed under brackets".into()))?;
                if c.iter().any(|(_, x)| !x.is_integer()) {
                    return Err(HscError::InvalidAlgebra("non-integral structure constant".into()));
                }
                consts.push((a, b, c));
            }
        }
        let labels = (0..n)
            .map(|i| format!("h{}", i + 1))
            .chain(positive.iter().map(|r| format!("e{}", root_label(r))))
            .chain(positive.iter().map(|r| format!("f{}", root_label(r))))
            .collect();
        let algebra = LieAlgebraData::from_brackets(dim, consts)?.with_labels(labels);
        if !validate_algebra(&algebra).is_valid() {
            return Err(HscError::InvalidAlgebra(format!("{kind} structure constants fail the Jacobi identity")));
        }
        Ok(RootDatum { kind, cartan, positive, algebra })
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// All roots: the positive ones followed by their negatives.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        self.positive.iter().cloned().chain(self.positive.iter().map(|r| r.iter().map(|c| -c).collect())).collect()
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    /// Basis index of `h_i`.
    pub fn h_index(&self, i: usize) -> usize {
        i
    }

    /// Basis index of `e_α` for the `k`-th positive root.
    pub fn e_index(&self, k: usize) -> usize {
        self.rank() + k
    }

    /// Basis index of `f_α` for the `k`-th positive root.
    pub fn f_index(&self, k: usize) -> usize {
        self.rank() + self.positive.len() + k
    }

    /// Whether the `k`-th positive root is supported on the simple roots in `set`.
    pub fn in_span(&self, k: usize, set: &[usize]) -> bool {
        self.positive[k].iter().enumerate().all(|(i, &c)| c == 0 || set.contains(&i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_root_counts() {
        for (kind, dim, roots) in [
            (CartanType::A(1), 3, 2),
            (CartanType::A(2), 8, 6),
            (CartanType::A(3), 15, 12),
            (CartanType::A(4), 24, 20),
            (CartanType::B2, 10, 8),
            (CartanType::G2, 14, 12),
        ] {
            let rd = RootDatum::new(kind).unwrap();
            assert_eq!(rd.algebra().dim(), dim, "{kind}");
            assert_eq!(rd.roots().len(), roots, "{kind}");
            assert_eq!(rd.roots().len(), dim - rd.rank());
        }
    }

    #[test]
    fn cartan_matrices() {
        assert_eq!(RootDatum::new(CartanType::A(2)).unwrap().cartan(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(RootDatum::new(CartanType::B2).unwrap().cartan(), &[vec![2, -1], vec![-2, 2]]);
        assert_eq!(RootDatum::new(CartanType::G2).unwrap().cartan(), &[vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn g2_highest_root() {
        let rd = RootDatum::new(CartanType::G2).unwrap();
        assert_eq!(rd.positive_roots().last().unwrap(), &vec![3, 2]);
    }

    #[test]
    fn chevalley_relations() {
        let rd = RootDatum::new(CartanType::B2).unwrap();
        let g = rd.algebra();
        for k in 0..rd.num_positive() {
            let h = g.bracket_basis(rd.e_index(k), rd.f_index(k));
            assert!(h.iter().all(|(i, x)| i < rd.rank() && x.is_integer()));
        }
    }

    #[test]
    fn parses_types() {
        assert_eq!("a3".parse::<CartanType>().unwrap(), CartanType::A(3));
        assert!("A5".parse::<CartanType>().is_err());
        assert!("E8".parse::<CartanType>().is_err());
    }
}
