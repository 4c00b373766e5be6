use serde::{Deserialize, Serialize};

use super::instance::{BKInstance, InstanceEcho};
use super::parabolic::ParabolicDatum;
use super::weyl::WeylCounts;
use crate::error::Result;
use crate::lie::{LieModuleData, ModulePairing};
use crate::spectral::{
    CheckOptions, DoubleComplex, FilteredComplexState, HochschildSerre, HqModule, PageSummary, TensorDecomposition,
    TensorReport, VerificationReport,
};

/// Coefficients of a polynomial in `q`, constant term first.
pub type Poly = Vec<usize>;

pub fn poly_mul(a: &[usize], b: &[usize]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// `1 + 2q + 2q² + q³` style rendering.
pub fn poly_string(p: &[usize]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| {
            let var = match k {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{k}"),
            };
            match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}{var}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Degree-graded dimensions as a polynomial in `q = degree / 2`, or `None`
/// when an odd degree is nonzero.
pub fn even_poly(dims: &[usize]) -> Option<Poly> {
    if dims.iter().skip(1).step_by(2).any(|&d| d != 0) {
        return None;
    }
    Some(trim(dims.iter().step_by(2).copied().collect()))
}

/// What the verification measures, independent of pass/fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BkReport {
    pub instance: InstanceEcho,
    pub weyl: WeylCounts,
    /// `dim H^n(g_K, l_Δ)` by degree.
    pub betti: Vec<usize>,
    pub total_dim: usize,
    pub pages: PageSummary,
    /// `max(2, r)` for the first page `r` that agrees with `E_∞`.
    pub degeneration_page: Option<usize>,
    /// The first page that agrees with `E_∞`.
    pub stationary_from: Option<usize>,
    pub e2_total: usize,
    /// `dim A^n` for the subalgebra `A = π*(H(l_K, l_Δ))`.
    pub subalgebra_dims: Vec<usize>,
    /// `dim (H / (A⁺))^n`.
    pub quotient_dims: Vec<usize>,
    /// `dim H^n(ũ_K)^{l_K}`.
    pub invariant_dims: Vec<usize>,
    pub poincare: Option<Poly>,
    pub subalgebra_poincare: Option<Poly>,
    pub quotient_poincare: Option<Poly>,
    pub tensor: Option<TensorReport>,
    /// Invariant dimensions in degree `2ℓ` against `#{w ∈ W^{P_K}: ℓ(w) = ℓ}`;
    /// reported for information only.
    pub kostant_by_length: Vec<(usize, usize)>,
    pub checks: VerificationReport,
}

impl BkReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }

    /// `(1 + q)(1 + q + q²)`-style factorization string, when both factors exist.
    pub fn factorization(&self) -> Option<String> {
        let (a, b) = (self.subalgebra_poincare.as_ref()?, self.quotient_poincare.as_ref()?);
        Some(format!("({})({})", poly_string(a), poly_string(b)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BkOptions {
    /// Also run the generic spectral-sequence checks on the instance.
    pub spectral_checks: bool,
    pub check: CheckOptions,
}

/// The sequence, its tensor decomposition and the report for one instance.
#[derive(Debug)]
pub struct BkAnalysis {
    pub sequence: HochschildSerre,
    pub decomposition: Option<TensorDecomposition>,
    pub report: BkReport,
}

fn mismatch<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Vec<String> {
    if got == want {
        Vec::new()
    } else {
        vec![format!("{what}: got {got:?}, expected {want:?}")]
    }
}

/// Builds the Hochschild–Serre sequence of `(g_K, l_Δ, ũ_K)` with trivial
/// coefficients and checks degeneration, the coset count, the subalgebra
/// `A`, the quotient by `(A⁺)` and the Poincaré factorization.
pub fn verify_structure(inst: &BKInstance, opts: &BkOptions) -> Result<BkAnalysis> {
    let triple = inst.triple();
    let n = triple.blocks().total();
    let hs = HochschildSerre::build(triple, &LieModuleData::trivial(n, 1), None)?;
    let weyl = inst.parabolic().weyl_counts(inst.k());
    let betti = hs.betti();
    let top = hs.top_degree();
    let pages = hs.pages();
    let stationary_from = pages.degeneration_page();
    let e2_total: usize = (0..=top).flat_map(|p| (0..=top - p).map(move |q| (p, q))).map(|(p, q)| pages.dim(2, p, q)).sum();

    let mut checks = VerificationReport::default();
    checks.record("instance", inst.check_invariants());
    checks.record(
        "even_degrees",
        betti.iter().enumerate().filter(|&(k, &d)| k % 2 == 1 && d != 0).map(|(k, _)| format!("H^{k} ≠ 0")).collect(),
    );
    checks.record(
        "degeneration_e2",
        if pages.degenerates_at(2) { Vec::new() } else { vec![format!("first stationary page is {stationary_from:?}")] },
    );
    let total_dim: usize = betti.iter().sum();
    checks.record("total_dim", mismatch("dim H(g_K, l_Δ) vs |W^P|", total_dim, weyl.min_coset_reps));
    checks.record("e2_dim", mismatch("dim E_2 vs |W^P|", e2_total, weyl.min_coset_reps));

    let decomposition = match hs.tensor_decomposition() {
        Ok(d) => Some(d),
        Err(e) => {
            checks.record("tensor", vec![e.to_string()]);
            None
        }
    };
    let mut subalgebra_dims = vec![0; top + 1];
    let mut quotient_dims = vec![0; top + 1];
    let mut invariant_dims = vec![0; top + 1];
    if let Some(d) = &decomposition {
        let t = &d.report;
        checks.record("tensor", t.failures.clone());
        for (k, &x) in t.base_dims.iter().enumerate() {
            subalgebra_dims[k] = x;
        }
        for (k, &x) in t.fiber_dims.iter().enumerate() {
            invariant_dims[k] = x;
        }
        if d.ring.is_some() {
            for (k, id) in d.ideal.iter().enumerate() {
                quotient_dims[k] = betti[k] - id.dim();
            }
        }
        let mut sub = Vec::new();
        if t.pi_star_injective != Some(true) {
            sub.push("π* is not injective".to_string());
        }
        if t.pi_star_multiplicative != Some(true) {
            sub.push("π* does not preserve products".to_string());
        }
        sub.extend(mismatch("dim A vs |W_{P_K}/W_P|", subalgebra_dims.iter().sum::<usize>(), weyl.k_over_levi));
        checks.record("subalgebra", sub);
        let mut quo = Vec::new();
        if t.kernel_is_ideal != Some(true) {
            quo.push("ker i* differs from the ideal (A⁺)".to_string());
        }
        if t.i_star_onto_invariants != Some(true) {
            quo.push("i* is not onto the invariants".to_string());
        }
        if t.free_basis != Some(true) {
            quo.push("A ⊗ (invariant lifts) is not a basis".to_string());
        }
        quo.extend(mismatch("quotient dims vs invariant dims", &quotient_dims, &invariant_dims));
        checks.record("quotient", quo);
        checks.record_result("psi_products", hs.check_psi_products(&ModulePairing::trivial(n)));
    }
    checks.record("kostant_total", mismatch("dim H(ũ_K)^{l_K} vs |W/W_{P_K}|", invariant_dims.iter().sum(), weyl.k_cosets));

    let poincare = even_poly(&betti);
    let subalgebra_poincare = even_poly(&subalgebra_dims);
    let quotient_poincare = even_poly(&quotient_dims);
    let factorization = match (&poincare, &subalgebra_poincare, &quotient_poincare) {
        (Some(p), Some(a), Some(b)) => mismatch("Poincaré(H) vs Poincaré(A)·Poincaré(H/(A⁺))", p.clone(), poly_mul(a, b)),
        _ => vec!["odd-degree classes present".into()],
    };
    checks.record("factorization", factorization);

    if opts.spectral_checks {
        for mut c in hs.verify(&opts.check).checks {
            c.name = format!("spectral.{}", c.name);
            checks.checks.push(c);
        }
    }

    let kostant_by_length = weyl
        .k_length_counts
        .iter()
        .enumerate()
        .map(|(l, &c)| (invariant_dims.get(2 * l).copied().unwrap_or(0), c))
        .collect();
    let report = BkReport {
        instance: inst.echo(),
        weyl,
        betti,
        total_dim,
        pages: pages.summary(),
        degeneration_page: stationary_from.map(|r| r.max(2)),
        stationary_from,
        e2_total,
        subalgebra_dims,
        quotient_dims,
        invariant_dims,
        poincare,
        subalgebra_poincare,
        quotient_poincare,
        tensor: decomposition.as_ref().map(|d| d.report.clone()),
        kostant_by_length,
        checks,
    };
    Ok(BkAnalysis { sequence: hs, decomposition, report })
}

/// `dim H^q(ũ_K)^{l_K}` against the coset counts of `W/W_{P_K}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantTable {
    /// `K`, 1-based.
    pub k: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    pub total: usize,
    /// `|W/W_{P_K}|`.
    pub expected_total: usize,
    /// `#{w ∈ W^{P_K}: ℓ(w) = ℓ}`.
    pub length_counts: Vec<usize>,
    /// Whether degree `2ℓ` matches `length_counts[ℓ]` and odd degrees vanish.
    pub per_degree_match: bool,
}

impl KostantTable {
    pub fn total_matches(&self) -> bool {
        self.total == self.expected_total
    }
}

/// Invariants of `l_K` on `H(ũ_K)`, computed from the `q`-rows of the
/// double complex of `(g_K, l_Δ, ũ_K)` without building pages.
pub fn kostant_table(parabolic: &ParabolicDatum, k: &[usize]) -> Result<KostantTable> {
    let t = parabolic.support_of(k)?;
    let inst = BKInstance::build(parabolic.clone(), &t)?;
    let triple = inst.triple();
    let fc = FilteredComplexState::new(triple, &LieModuleData::trivial(triple.blocks().total(), 1))?;
    let dc = DoubleComplex::new(&fc)?;
    let hq = HqModule::new(&fc, &dc)?;
    let invariant_dims: Vec<usize> = (0..=hq.max_q()).map(|q| hq.invariants(q).dim()).collect();
    let counts = parabolic.weyl_counts(inst.k());
    let per_degree_match = invariant_dims.iter().enumerate().all(|(d, &x)| {
        let want = if d % 2 == 0 { counts.k_length_counts.get(d / 2).copied().unwrap_or(0) } else { 0 };
        x == want
    }) && counts.k_length_counts.len() <= invariant_dims.len().div_ceil(2);
    Ok(KostantTable {
        k: inst.k().iter().map(|i| i + 1).collect(),
        total: invariant_dims.iter().sum(),
        invariant_dims,
        expected_total: counts.k_cosets,
        length_counts: counts.k_length_counts,
        per_degree_match,
    })
}

/// Every `K ⊇ I` for a parabolic, as sorted 0-based sets.
pub fn supersets_of_levi(parabolic: &ParabolicDatum) -> Vec<Vec<usize>> {
    let nl = parabolic.non_levi();
    (0..1u32 << nl.len())
        .map(|bits| {
            let mut k = parabolic.levi().to_vec();
            k.extend(nl.iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).map(|(_, &i)| i));
            k.sort_unstable();
            k
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::{CartanType, RootDatum};

    fn parabolic(kind: CartanType, levi: &[usize]) -> ParabolicDatum {
        ParabolicDatum::new(RootDatum::new(kind).unwrap(), levi).unwrap()
    }

    #[test]
    fn polynomials() {
        assert_eq!(poly_mul(&[1, 1], &[1, 1, 1]), vec![1, 2, 2, 1]);
        assert_eq!(poly_string(&[1, 2, 2, 1]), "1 + 2q + 2q^2 + q^3");
        assert_eq!(even_poly(&[1, 0, 2, 0, 1]), Some(vec![1, 2, 1]));
        assert_eq!(even_poly(&[1, 1]), None);
    }

    #[test]
    fn a2_full_flag_with_one_support_root() {
        let inst = BKInstance::build(parabolic(CartanType::A(2), &[]), &[1]).unwrap();
        let a = verify_structure(&inst, &BkOptions::default()).unwrap();
        let r = &a.report;
        for c in r.checks.failed() {
            panic!("{}: {:?}", c.name, c.failures);
        }
        assert_eq!(r.degeneration_page, Some(2));
        assert_eq!(r.subalgebra_poincare, Some(vec![1, 1]));
        assert_eq!(r.quotient_poincare, Some(vec![1, 1, 1]));
        assert_eq!(r.poincare, Some(vec![1, 2, 2, 1]));
        assert_eq!(r.factorization().unwrap(), "(1 + q)(1 + q + q^2)");
    }

    #[test]
    fn kostant_totals_for_a2() {
        let p = parabolic(CartanType::A(2), &[]);
        for k in supersets_of_levi(&p) {
            let t = kostant_table(&p, &k).unwrap();
            assert!(t.total_matches(), "{t:?}");
            assert!(t.per_degree_match, "{t:?}");
        }
    }
}
