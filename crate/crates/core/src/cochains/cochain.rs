use std::collections::BTreeMap;

use super::frame::{bits, Frame};
use crate::linalg::SparseVec;
use crate::rational::Rational;

/// An element of `C^n(g; M)`, stored on strictly increasing index tuples
/// (encoded as bit masks) with values in `M`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cochain {
    degree: usize,
    coeffs: BTreeMap<(u64, usize), Rational>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, coeffs: BTreeMap::new() }
    }

    /// A degree-0 cochain, i.e. a vector of `M`.
    pub fn constant(m: &SparseVec) -> Self {
        let mut c = Cochain::zero(0);
        for (i, x) in m.iter() {
            c.add_term(0, i, x);
        }
        c
    }

    /// `e^T ⊗ e_m` for the increasing tuple `tuple`.
    pub fn basis(tuple: &[usize], m: usize) -> Self {
        let mask = tuple.iter().fold(0u64, |acc, &i| acc | (1 << i));
        assert_eq!(mask.count_ones() as usize, tuple.len(), "repeated index");
        let mut c = Cochain::zero(tuple.len());
        c.add_term(mask, m, &Rational::ONE);
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Accumulates `x` onto the coefficient of `(mask, m)`.
    pub fn add_term(&mut self, mask: u64, m: usize, x: &Rational) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if x.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry((mask, m)) {
            Entry::Vacant(e) => {
                e.insert(x.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Accumulates `c · v` onto the value at `mask`.
    pub fn add_vector(&mut self, mask: u64, c: &Rational, v: &SparseVec) {
        for (m, x) in v.iter() {
            self.add_term(mask, m, &(c * x));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, usize, &Rational)> + '_ {
        self.coeffs.iter().map(|((mask, m), x)| (*mask, *m, x))
    }

    pub fn coefficient(&self, mask: u64, m: usize) -> Rational {
        self.coeffs.get(&(mask, m)).cloned().unwrap_or(Rational::ZERO)
    }

    /// Value `f(e_{t_1}, …, e_{t_n})` on an increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> SparseVec {
        let mask = tuple.iter().fold(0u64, |acc, &i| acc | (1 << i));
        SparseVec::from_entries(self.coeffs.range((mask, 0)..=(mask, usize::MAX)).map(|((_, m), x)| (*m, x.clone())))
    }

    /// Distinct support masks.
    pub fn support(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.keys().map(|(m, _)| *m).collect();
        v.dedup();
        v
    }

    /// Keeps only the terms on tuples inside `allowed`.
    pub fn restrict_support(&self, allowed: u64) -> Cochain {
        Cochain {
            degree: self.degree,
            coeffs: self.coeffs.iter().filter(|((mask, _), _)| mask & !allowed == 0).map(|(k, x)| (*k, x.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        if c.is_zero() {
            return Cochain::zero(self.degree);
        }
        Cochain { degree: self.degree, coeffs: self.coeffs.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "adding cochains of different degrees");
        let mut out = self.clone();
        for ((mask, m), x) in &other.coeffs {
            out.add_term(*mask, *m, x);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    /// Coordinates in `frame`, or `None` if the support leaves the frame.
    pub fn to_coords(&self, frame: &Frame) -> Option<SparseVec> {
        assert_eq!(frame.degree(), self.degree);
        let mut e = Vec::with_capacity(self.coeffs.len());
        for ((mask, m), x) in &self.coeffs {
            if *m >= frame.module_dim() {
                return None;
            }
            e.push((frame.index(*mask, *m)?, x.clone()));
        }
        Some(SparseVec::from_entries(e))
    }

    /// Coordinates in `frame`, dropping any part outside it.
    pub fn to_coords_projected(&self, frame: &Frame) -> SparseVec {
        SparseVec::from_entries(
            self.coeffs
                .iter()
                .filter_map(|((mask, m), x)| frame.index(*mask, *m).map(|i| (i, x.clone()))),
        )
    }

    pub fn from_coords(frame: &Frame, v: &SparseVec) -> Cochain {
        let mut c = Cochain::zero(frame.degree());
        for (i, x) in v.iter() {
            let (mask, m) = frame.entry(i);
            c.coeffs.insert((mask, m), x.clone());
        }
        c
    }

    /// Re-indexes algebra and module indices; tuples must stay increasing-compatible
    /// (the sign of the induced reordering is applied).
    pub fn relabel(&self, algebra: impl Fn(usize) -> usize, module: impl Fn(usize) -> usize) -> Cochain {
        let mut out = Cochain::zero(self.degree);
        for ((mask, m), x) in &self.coeffs {
            let idx: Vec<usize> = bits(*mask).map(&algebra).collect();
            let mut inversions = 0;
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    if idx[a] > idx[b] {
                        inversions += 1;
                    }
                }
            }
            let nm = idx.iter().fold(0u64, |acc, &i| acc | (1 << i));
            let s = if inversions % 2 == 0 { x.clone() } else { -x };
            out.add_term(nm, module(*m), &s);
        }
        out
    }
}
