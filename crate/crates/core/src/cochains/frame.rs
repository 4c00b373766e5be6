use std::sync::OnceLock;

/// `binom(n, k)` for `n, k ≤ 64`.
pub fn binomial(n: usize, k: usize) -> usize {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut t = vec![vec![0u64; 66]; 66];
        for i in 0..66 {
            t[i][0] = 1;
            for j in 1..=i {
                t[i][j] = t[i - 1][j - 1].saturating_add(t[i - 1][j]);
            }
        }
        t
    });
    if k > n {
        0
    } else {
        t[n][k] as usize
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Number of set bits of `mask` strictly below bit `i`.
#[inline]
pub fn count_below(mask: u64, i: usize) -> usize {
    (mask & ((1u64 << i) - 1)).count_ones() as usize
}

/// Number of set bits strictly between bits `a` and `b` (in either order).
#[inline]
pub fn count_between(mask: u64, a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi == lo {
        return 0;
    }
    let range = ((1u64 << hi) - 1) & !((1u64 << (lo + 1)) - 1);
    (mask & range).count_ones() as usize
}

/// `(-1)^k` as `i64`.
#[inline]
pub fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coordinates for degree-`n` cochains supported on subsets of an allowed index
/// set, tensored with a module of dimension `module_dim`.
///
/// Subsets are ranked in colexicographic order of their positions in the
/// allowed list; coordinate = `rank · module_dim + m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    degree: usize,
    allowed: Vec<usize>,
    local: Vec<Option<usize>>,
    allowed_mask: u64,
    module_dim: usize,
}

impl Frame {
    pub fn new(algebra_dim: usize, allowed: &[usize], degree: usize, module_dim: usize) -> Self {
        assert!(algebra_dim <= 63, "algebras above dimension 63 are not supported");
        let mut allowed = allowed.to_vec();
        allowed.sort_unstable();
        allowed.dedup();
        let mut local = vec![None; algebra_dim];
        for (k, &i) in allowed.iter().enumerate() {
            local[i] = Some(k);
        }
        let allowed_mask = allowed.iter().fold(0u64, |m, &i| m | (1 << i));
        Frame { degree, allowed, local, allowed_mask, module_dim }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn allowed(&self) -> &[usize] {
        &self.allowed
    }

    pub fn allowed_mask(&self) -> u64 {
        self.allowed_mask
    }

    pub fn num_masks(&self) -> usize {
        binomial(self.allowed.len(), self.degree)
    }

    pub fn len(&self) -> usize {
        self.num_masks() * self.module_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        mask & !self.allowed_mask == 0 && mask.count_ones() as usize == self.degree
    }

    pub fn mask_rank(&self, mask: u64) -> Option<usize> {
        if !self.contains_mask(mask) {
            return None;
        }
        let mut r = 0;
        for (k, b) in bits(mask).enumerate() {
            r += binomial(self.local[b].unwrap(), k + 1);
        }
        Some(r)
    }

    pub fn mask_of_rank(&self, mut rank: usize) -> u64 {
        let mut mask = 0u64;
        let mut c = self.allowed.len();
        for k in (1..=self.degree).rev() {
            c -= 1;
            while binomial(c, k) > rank {
                c -= 1;
            }
            rank -= binomial(c, k);
            mask |= 1 << self.allowed[c];
        }
        mask
    }

    pub fn index(&self, mask: u64, m: usize) -> Option<usize> {
        self.mask_rank(mask).map(|r| r * self.module_dim + m)
    }

    pub fn entry(&self, idx: usize) -> (u64, usize) {
        (self.mask_of_rank(idx / self.module_dim), idx % self.module_dim)
    }

    /// All masks in rank order.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.num_masks()).map(move |r| self.mask_of_rank(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_a_bijection() {
        let f = Frame::new(7, &[0, 2, 3, 5, 6], 3, 2);
        assert_eq!(f.len(), 20);
        let mut seen = vec![false; f.num_masks()];
        for r in 0..f.num_masks() {
            let m = f.mask_of_rank(r);
            assert_eq!(m.count_ones(), 3);
            assert_eq!(f.mask_rank(m), Some(r));
            seen[r] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(f.mask_rank(0b10), None);
        for idx in 0..f.len() {
            let (m, k) = f.entry(idx);
            assert_eq!(f.index(m, k), Some(idx));
        }
    }

    #[test]
    fn degree_zero_frame() {
        let f = Frame::new(3, &[0, 1, 2], 0, 4);
        assert_eq!(f.len(), 4);
        assert_eq!(f.index(0, 3), Some(3));
        assert_eq!(f.entry(2), (0, 2));
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(count_below(0b10110, 3), 2);
        assert_eq!(count_between(0b111111, 1, 4), 2);
        assert_eq!(count_between(0b111111, 4, 1), 2);
        assert_eq!(count_between(0b111111, 2, 2), 0);
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
    }
}
