use super::roots::RootDatum;
use super::weyl::{weyl_counts, WeylCounts};
use crate::error::{HscError, Result};

/// A standard parabolic `P ⊇ B` given by the simple roots of its Levi factor.
///
/// Simple roots are 0-based internally. Support positions `1..=m` number the
/// `m` simple roots outside the Levi in increasing order.
#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    root: RootDatum,
    levi: Vec<usize>,
}

fn normalize(set: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&i| i >= n) {
        return Err(HscError::InvalidIndexSet(format!("{what} index {} exceeds rank {n}", bad + 1)));
    }
    Ok(v)
}

impl ParabolicDatum {
    pub fn new(root: RootDatum, levi: &[usize]) -> Result<Self> {
        let levi = normalize(levi, root.rank(), "Levi")?;
        Ok(ParabolicDatum { root, levi })
    }

    pub fn root(&self) -> &RootDatum {
        &self.root
    }

    pub fn levi(&self) -> &[usize] {
        &self.levi
    }

    /// Number of simple roots outside the Levi.
    pub fn m(&self) -> usize {
        self.root.rank() - self.levi.len()
    }

    /// Simple roots outside the Levi, in support-position order.
    pub fn non_levi(&self) -> Vec<usize> {
        (0..self.root.rank()).filter(|i| !self.levi.contains(i)).collect()
    }

    /// Simple roots for 1-based support positions.
    pub fn support_roots(&self, t_support: &[usize]) -> Result<Vec<usize>> {
        let nl = self.non_levi();
        let mut out = Vec::with_capacity(t_support.len());
        for &t in t_support {
            let i = t
                .checked_sub(1)
                .and_then(|k| nl.get(k))
                .ok_or_else(|| HscError::InvalidIndexSet(format!("support position {t} is outside 1..={}", nl.len())))?;
            out.push(*i);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `K = I ∪ J(t)` as sorted simple-root indices.
    pub fn k_set(&self, t_support: &[usize]) -> Result<Vec<usize>> {
        let mut k = self.levi.clone();
        k.extend(self.support_roots(t_support)?);
        k.sort_unstable();
        k.dedup();
        Ok(k)
    }

    /// Support positions of a set `K ⊇ I`.
    pub fn support_of(&self, k: &[usize]) -> Result<Vec<usize>> {
        let k = normalize(k, self.root.rank(), "K")?;
        if !self.levi.iter().all(|i| k.contains(i)) {
            return Err(HscError::InvalidIndexSet("K must contain the Levi roots".into()));
        }
        Ok(self
            .non_levi()
            .iter()
            .enumerate()
            .filter(|(_, i)| k.contains(i))
            .map(|(pos, _)| pos + 1)
            .collect())
    }

    /// Positive roots (by index) lying in the span of `set`.
    pub fn levi_roots(&self, set: &[usize]) -> Vec<usize> {
        (0..self.root.num_positive()).filter(|&k| self.root.in_span(k, set)).collect()
    }

    /// Positive roots (by index) outside the span of `set`.
    pub fn nilradical_roots(&self, set: &[usize]) -> Vec<usize> {
        (0..self.root.num_positive()).filter(|&k| !self.root.in_span(k, set)).collect()
    }

    /// Basis indices of `l_M`: all `h_i`, then `e_α` and `f_α` for `α ∈ Φ_M⁺`.
    pub fn l_indices(&self, set: &[usize]) -> Vec<usize> {
        let roots = self.levi_roots(set);
        (0..self.root.rank())
            .map(|i| self.root.h_index(i))
            .chain(roots.iter().map(|&k| self.root.e_index(k)))
            .chain(roots.iter().map(|&k| self.root.f_index(k)))
            .collect()
    }

    /// Basis indices of `u_{M,+}`.
    pub fn u_plus_indices(&self, set: &[usize]) -> Vec<usize> {
        self.nilradical_roots(set).iter().map(|&k| self.root.e_index(k)).collect()
    }

    /// Basis indices of `u_{M,−}`.
    pub fn u_minus_indices(&self, set: &[usize]) -> Vec<usize> {
        self.nilradical_roots(set).iter().map(|&k| self.root.f_index(k)).collect()
    }

    pub fn weyl_counts(&self, k: &[usize]) -> WeylCounts {
        weyl_counts(self.root.cartan(), &self.levi, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::CartanType;

    #[test]
    fn support_positions_skip_levi_roots() {
        let p = ParabolicDatum::new(RootDatum::new(CartanType::A(3)).unwrap(), &[1]).unwrap();
        assert_eq!(p.m(), 2);
        assert_eq!(p.non_levi(), vec![0, 2]);
        assert_eq!(p.k_set(&[2]).unwrap(), vec![1, 2]);
        assert_eq!(p.support_of(&[0, 1]).unwrap(), vec![1]);
        assert!(p.k_set(&[3]).is_err());
    }

    #[test]
    fn nilradical_dimensions() {
        let p = ParabolicDatum::new(RootDatum::new(CartanType::A(3)).unwrap(), &[0]).unwrap();
        assert_eq!(p.u_plus_indices(p.levi()).len(), 5);
        assert_eq!(p.u_minus_indices(p.levi()).len(), 5);
        assert_eq!(p.l_indices(p.levi()).len(), 5);
    }
}
