use super::cochain::Cochain;
use super::frame::{bits, count_below, count_between, sign, Frame};
use crate::error::{HscError, Result};
use crate::lie::{LieAlgebraData, LieModuleData, ModulePairing};
use crate::linalg::{RationalMatrix, SparseVec};
use crate::rational::Rational;

/// Chevalley-Eilenberg operators for a Lie algebra acting on a module.
///
/// Conventions on increasing tuples `x_0 < … < x_n`:
/// `df(x_0..x_n) = Σ_i (−1)^i x_i·f(.., x̂_i, ..) + Σ_{i<j} (−1)^{i+j} f([x_i, x_j], .., x̂_i, .., x̂_j, ..)`,
/// `(θ_z f)(x) = z·f(x) − Σ_i f(.., [z, x_i], ..)`, `(i_z f)(x_2..) = f(z, x_2, ..)`.
#[derive(Clone, Debug)]
pub struct CeOperators {
    g: LieAlgebraData,
    module: LieModuleData,
    /// For each `c`: all `(a, b, c_ab^c)` with `a < b`.
    by_target: Vec<Vec<(usize, usize, Rational)>>,
    /// `[x][c]`: all `(u, c_xu^c)`.
    by_source: Vec<Vec<Vec<(usize, Rational)>>>,
    module_trivial: bool,
}

impl CeOperators {
    pub fn new(g: &LieAlgebraData, module: &LieModuleData) -> Result<Self> {
        if module.algebra_dim() != g.dim() {
            return Err(HscError::InvalidModule(format!(
                "module has {} action matrices but the algebra has dimension {}",
                module.algebra_dim(),
                g.dim()
            )));
        }
        let n = g.dim();
        let mut by_target = vec![Vec::new(); n];
        let mut by_source = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                for (c, x) in g.bracket_basis(a, b).iter() {
                    if a < b {
                        by_target[c].push((a, b, x.clone()));
                    }
                    by_source[a][c].push((b, x.clone()));
                }
            }
        }
        Ok(CeOperators { g: g.clone(), module: module.clone(), by_target, by_source, module_trivial: module.is_trivial() })
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.g
    }

    pub fn module(&self) -> &LieModuleData {
        &self.module
    }

    pub fn differential(&self, f: &Cochain) -> Cochain {
        let n = self.g.dim();
        let mut out = Cochain::zero(f.degree() + 1);
        for (t, m, v) in f.terms() {
            if !self.module_trivial {
                for i in 0..n {
                    if t & (1 << i) != 0 {
                        continue;
                    }
                    let col = self.module.action(i).column(m);
                    if col.is_zero() {
                        continue;
                    }
                    let s = Rational::from_int(sign(count_below(t, i)));
                    out.add_vector(t | (1 << i), &(&s * v), col);
                }
            }
            for c in bits(t) {
                let rest = t & !(1 << c);
                let sc = sign(count_below(rest, c));
                for (a, b, coef) in &self.by_target[c] {
                    let ab = (1u64 << a) | (1u64 << b);
                    if rest & ab != 0 {
                        continue;
                    }
                    let u = rest | ab;
                    let s = sc * sign(count_below(u, *a) + count_below(u, *b));
                    out.add_term(u, m, &(&(coef * v) * &Rational::from_int(s)));
                }
            }
        }
        out
    }

    /// `θ_{e_x}`.
    pub fn theta_basis(&self, x: usize, f: &Cochain) -> Cochain {
        let mut out = Cochain::zero(f.degree());
        let rho = self.module.action(x);
        for (t, m, v) in f.terms() {
            if !self.module_trivial {
                let col = rho.column(m);
                if !col.is_zero() {
                    out.add_vector(t, v, col);
                }
            }
            for c in bits(t) {
                let rest = t & !(1 << c);
                for (u, coef) in &self.by_source[x][c] {
                    if rest & (1 << u) != 0 {
                        continue;
                    }
                    let s = -sign(count_between(rest, *u, c));
                    out.add_term(rest | (1 << u), m, &(&(coef * v) * &Rational::from_int(s)));
                }
            }
        }
        out
    }

    /// `d i_z f + i_z d f`; on degree 0 only the second term exists.
    pub fn cartan_rhs(&self, z: &SparseVec, f: &Cochain) -> Cochain {
        let second = iota(z, &self.differential(f));
        if f.degree() == 0 {
            second
        } else {
            self.differential(&iota(z, f)).add(&second)
        }
    }

    pub fn theta(&self, z: &SparseVec, f: &Cochain) -> Cochain {
        let mut out = Cochain::zero(f.degree());
        for (x, c) in z.iter() {
            out = out.add(&self.theta_basis(x, f).scale(c));
        }
        out
    }

    /// The module `C^q(sub; M)` where `sub` is spanned by the basis vectors in
    /// `sub_indices` and is stable under the bracket with all of the algebra
    /// (an ideal). The algebra acts by `θ`, evaluated on arguments from `sub`.
    pub fn cochain_module(&self, sub_indices: &[usize], q: usize) -> (Frame, LieModuleData) {
        let frame = Frame::new(self.g.dim(), sub_indices, q, self.module.dim());
        let len = frame.len();
        let action = (0..self.g.dim())
            .map(|x| {
                let cols = (0..len)
                    .map(|i| {
                        let f = Cochain::from_coords(&frame, &SparseVec::unit(i));
                        self.theta_basis(x, &f).to_coords_projected(&frame)
                    })
                    .collect();
                RationalMatrix::from_columns(len, cols)
            })
            .collect();
        let m = LieModuleData::new(len, action).expect("square action matrices");
        (frame, m)
    }
}

/// `i_z`; on degree 0 the contraction is defined to be zero.
pub fn iota(z: &SparseVec, f: &Cochain) -> Cochain {
    if f.degree() == 0 {
        return Cochain::zero(0);
    }
    let mut out = Cochain::zero(f.degree() - 1);
    for (t, m, v) in f.terms() {
        for (x, c) in z.iter() {
            if t & (1 << x) == 0 {
                continue;
            }
            let s = Rational::from_int(sign(count_below(t, x)));
            out.add_term(t & !(1 << x), m, &(&(c * v) * &s));
        }
    }
    out
}

/// Cup product `a ∪ b` through a pairing, by the signed shuffle sum.
pub fn cup(a: &Cochain, b: &Cochain, pairing: &ModulePairing) -> Result<Cochain> {
    for (_, m, _) in a.terms() {
        if m >= pairing.src1.dim() {
            return Err(HscError::PairingShape("left cochain value outside the first factor".into()));
        }
    }
    for (_, n, _) in b.terms() {
        if n >= pairing.src2.dim() {
            return Err(HscError::PairingShape("right cochain value outside the second factor".into()));
        }
    }
    Ok(cup_unchecked(a, b, pairing))
}

pub(crate) fn cup_unchecked(a: &Cochain, b: &Cochain, pairing: &ModulePairing) -> Cochain {
    let mut out = Cochain::zero(a.degree() + b.degree());
    for (s, m, x) in a.terms() {
        for (t, n, y) in b.terms() {
            if s & t != 0 {
                continue;
            }
            let inv: usize = bits(s).map(|i| count_below(t, i)).sum();
            let c = &(x * y) * &Rational::from_int(sign(inv));
            out.add_vector(s | t, &c, pairing.pair_basis(m, n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_adjoint() -> CeOperators {
        let g = LieAlgebraData::sl2();
        CeOperators::new(&g, &LieModuleData::adjoint(&g)).unwrap()
    }

    #[test]
    fn degree_zero_trivial_is_closed() {
        let g = LieAlgebraData::sl2();
        let ops = CeOperators::new(&g, &LieModuleData::trivial(3, 1)).unwrap();
        assert!(ops.differential(&Cochain::constant(&SparseVec::unit(0))).is_zero());
    }

    #[test]
    fn dual_of_h() {
        // dh*(e, f) = −h*([e, f]) = −1 with tuple (e, f) = indices (1, 2).
        let g = LieAlgebraData::sl2();
        let ops = CeOperators::new(&g, &LieModuleData::trivial(3, 1)).unwrap();
        let d = ops.differential(&Cochain::basis(&[0], 0));
        let mut expect = Cochain::zero(2);
        expect.add_term(0b110, 0, &Rational::from_int(-1));
        assert_eq!(d, expect);
    }

    #[test]
    fn cartan_identity_on_basis() {
        let ops = sl2_adjoint();
        for t in [vec![], vec![0], vec![1, 2], vec![0, 2], vec![0, 1, 2]] {
            for m in 0..3 {
                let f = Cochain::basis(&t, m);
                for z in 0..3 {
                    let zv = SparseVec::unit(z);
                    let lhs = ops.theta_basis(z, &f);
                    let rhs = ops.cartan_rhs(&zv, &f);
                    assert_eq!(lhs, rhs, "tuple {t:?} module {m} z {z}");
                }
            }
        }
    }

    #[test]
    fn unit_cup() {
        let g = LieAlgebraData::sl2();
        let one = Cochain::constant(&SparseVec::unit(0));
        let b = Cochain::basis(&[0, 2], 0);
        assert_eq!(cup(&one, &b, &ModulePairing::trivial(g.dim())).unwrap(), b);
    }
}
