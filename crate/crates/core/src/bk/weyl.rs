use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

/// A Weyl group element as the integer matrix of its action on root
/// coordinates (column `j` is `w(α_j)`), stored row-major.
type Element = Vec<i64>;

/// A finite Weyl group enumerated from its Cartan matrix.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    reflections: Vec<Element>,
    /// Elements in breadth-first order from the identity, with their lengths.
    elements: Vec<(Element, usize)>,
}

fn mul(n: usize, a: &Element, b: &Element) -> Element {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    out
}

/// The elements generated by the given reflections, with word lengths.
fn generate(n: usize, gens: &[&Element]) -> Vec<(Element, usize)> {
    let identity: Element = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
    let mut seen: BTreeMap<Element, usize> = BTreeMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([(identity, 0usize)]);
    while let Some((w, l)) = queue.pop_front() {
        if seen.contains_key(&w) {
            continue;
        }
        seen.insert(w.clone(), l);
        order.push((w.clone(), l));
        for s in gens {
            let ws = mul(n, &w, s);
            if !seen.contains_key(&ws) {
                queue.push_back((ws, l + 1));
            }
        }
    }
    order
}

impl WeylGroup {
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`, so `s_i(α_j) = α_j − cartan[i][j] α_i`.
    pub fn new(cartan: &[Vec<i64>]) -> Self {
        let n = cartan.len();
        let reflections: Vec<Element> = (0..n)
            .map(|i| {
                let mut m = vec![0; n * n];
                for j in 0..n {
                    m[j * n + j] = 1;
                    m[i * n + j] -= cartan[i][j];
                }
                m
            })
            .collect();
        let all: Vec<&Element> = reflections.iter().collect();
        let elements = generate(n, &all);
        WeylGroup { rank: n, reflections, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `|W_S|` for the parabolic subgroup generated by `s_i`, `i ∈ subset`.
    pub fn parabolic_order(&self, subset: &[usize]) -> usize {
        let gens: Vec<&Element> = subset.iter().map(|&i| &self.reflections[i]).collect();
        generate(self.rank, &gens).len()
    }

    /// Lengths of the minimal coset representatives of `W / W_S`: the elements
    /// with `w(α_i) > 0` for every `i ∈ subset`.
    pub fn min_coset_lengths(&self, subset: &[usize]) -> Vec<usize> {
        let n = self.rank;
        self.elements
            .iter()
            .filter(|(w, _)| subset.iter().all(|&i| (0..n).all(|r| w[r * n + i] >= 0)))
            .map(|(_, l)| *l)
            .collect()
    }

    /// Number of minimal coset representatives of each length.
    pub fn coset_length_counts(&self, subset: &[usize]) -> Vec<usize> {
        let lengths = self.min_coset_lengths(subset);
        let top = lengths.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0; top + 1];
        for l in lengths {
            counts[l] += 1;
        }
        counts
    }
}

/// Group orders and coset counts for a parabolic `P` (Levi simple roots `levi`)
/// and `K ⊇ levi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylCounts {
    pub order: usize,
    pub levi_order: usize,
    pub k_order: usize,
    /// `|W^P| = |W / W_P|`.
    pub min_coset_reps: usize,
    /// `|W_{P_K} / W_P|`.
    pub k_over_levi: usize,
    /// `|W / W_{P_K}|`.
    pub k_cosets: usize,
    /// Length-graded counts of `W^P`.
    pub length_counts: Vec<usize>,
    /// Length-graded counts of `W^{P_K}`.
    pub k_length_counts: Vec<usize>,
}

pub fn weyl_counts(cartan: &[Vec<i64>], levi: &[usize], k: &[usize]) -> WeylCounts {
    let w = WeylGroup::new(cartan);
    let order = w.order();
    let levi_order = w.parabolic_order(levi);
    let k_order = w.parabolic_order(k);
    let length_counts = w.coset_length_counts(levi);
    let k_length_counts = w.coset_length_counts(k);
    WeylCounts {
        order,
        levi_order,
        k_order,
        min_coset_reps: length_counts.iter().sum(),
        k_over_levi: k_order / levi_order,
        k_cosets: order / k_order,
        length_counts,
        k_length_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn orders() {
        assert_eq!(WeylGroup::new(&a(1)).order(), 2);
        assert_eq!(WeylGroup::new(&a(2)).order(), 6);
        assert_eq!(WeylGroup::new(&a(3)).order(), 24);
        assert_eq!(WeylGroup::new(&a(4)).order(), 120);
        assert_eq!(WeylGroup::new(&[vec![2, -1], vec![-2, 2]]).order(), 8);
        assert_eq!(WeylGroup::new(&[vec![2, -3], vec![-1, 2]]).order(), 12);
    }

    #[test]
    fn coset_counts() {
        let c = weyl_counts(&a(2), &[], &[]);
        assert_eq!(c.min_coset_reps, 6);
        let c = weyl_counts(&a(2), &[0], &[0]);
        assert_eq!(c.min_coset_reps, 3);
        assert_eq!(c.length_counts, vec![1, 1, 1]);
        let c = weyl_counts(&a(3), &[], &[]);
        assert_eq!(c.length_counts, vec![1, 3, 5, 6, 5, 3, 1]);
        let c = weyl_counts(&a(3), &[], &[1]);
        assert_eq!((c.k_over_levi, c.k_cosets), (2, 12));
        assert_eq!(c.k_over_levi * c.k_cosets, c.min_coset_reps);
    }
}
