//! Exit-gate checks, one test per criterion. Each prints a single
//! `acceptance N: PASS|FAIL ...` line to stderr, bypassing output capture.

mod oracle;

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use hsc_cli::Report;
use hsc_core::bk::{
    kostant_table, supersets_of_levi, verify_structure, BKInstance, BkOptions, CartanType, ParabolicDatum, RootDatum,
};
use hsc_core::cochains::{cartan_failures, contraction_failures, square_zero_failures, RelativeComplex};
use hsc_core::lie::{LieAlgebraData, LieModuleData, ModulePairing, PairData, TripleData};
use hsc_core::linalg::{RationalMatrix, SparseVec};
use hsc_core::spectral::{CheckOptions, HochschildSerre, VerificationReport};

fn announce(n: u32, ok: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "acceptance {n}: {} ({:.2}s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn gate(n: u32, start: Instant, limit: Option<Duration>, failures: Vec<String>, detail: &str) {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if let Some(l) = limit {
        if elapsed > l {
            failures.push(format!("took {:.1}s, budget {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64()));
        }
    }
    announce(n, failures.is_empty(), elapsed, detail);
    assert!(failures.is_empty(), "criterion {n}: {failures:#?}");
}

fn unit(i: usize) -> SparseVec {
    SparseVec::unit(i)
}

fn heisenberg() -> LieAlgebraData {
    LieAlgebraData::from_int_constants(3, &[(0, 1, &[(2, 1)])]).unwrap()
}

fn sl2_borel() -> LieAlgebraData {
    LieAlgebraData::from_int_constants(2, &[(0, 1, &[(1, 2)])]).unwrap()
}

fn bk(kind: CartanType, levi: &[usize], t: &[usize]) -> BKInstance {
    let p = ParabolicDatum::new(RootDatum::new(kind).unwrap(), levi).unwrap();
    BKInstance::build(p, t).unwrap()
}

const A2_SUPPORTS: [&[usize]; 4] = [&[], &[1], &[2], &[1, 2]];

#[test]
fn criterion_1_cochain_identities() {
    let start = Instant::now();
    let sl2 = LieAlgebraData::sl2();
    let mut cases: Vec<(String, PairData, LieModuleData)> = Vec::new();
    let (p, basis) = PairData::from_subalgebra(&sl2, &[unit(0)]).unwrap();
    cases.push(("sl2 / h / adjoint".into(), p, LieModuleData::adjoint(&sl2).rebase(&basis)));
    cases.push(("sl2 / 0 / trivial".into(), PairData::absolute(&sl2), LieModuleData::trivial(3, 1)));
    let ab3 = LieAlgebraData::abelian(3);
    let nil = RationalMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]]);
    let z = RationalMatrix::zeros(2, 2);
    let m = LieModuleData::new(2, vec![z.clone(), nil, z]).unwrap();
    let (p, basis) = PairData::from_subalgebra(&ab3, &[unit(0)]).unwrap();
    cases.push(("abelian(3) / e1 / nilpotent plane".into(), p, m.rebase(&basis)));
    cases.push(("abelian(4) / 0 / trivial".into(), PairData::absolute(&LieAlgebraData::abelian(4)), LieModuleData::trivial(4, 1)));
    let h = heisenberg();
    cases.push(("heisenberg / 0 / adjoint".into(), PairData::absolute(&h), LieModuleData::adjoint(&h)));
    for t in A2_SUPPORTS {
        let inst = bk(CartanType::A(2), &[], t);
        let pair = inst.triple().pair();
        let n = pair.dim();
        cases.push((format!("A2 BK t={t:?}"), pair, LieModuleData::trivial(n, 1)));
    }
    let mut failures = Vec::new();
    for (name, pair, module) in &cases {
        let cx = RelativeComplex::new(pair, module).unwrap();
        let ops = cx.ops();
        for f in square_zero_failures(ops, usize::MAX, 0)
            .into_iter()
            .chain(cartan_failures(ops, usize::MAX, 0))
            .chain(contraction_failures(ops, usize::MAX, 0))
        {
            failures.push(format!("{name}: {f}"));
        }
        if !cx.check_d_stable() {
            failures.push(format!("{name}: relative cochains not d-stable"));
        }
    }
    gate(1, start, Some(Duration::from_secs(10)), failures, &format!("d∘d = 0, θ = di + id exhaustively on {} triples", cases.len()));
}

/// Triples with modules for the spectral-sequence criteria.
struct Case {
    name: String,
    triple: TripleData,
    module: LieModuleData,
}

fn spectral_cases() -> Vec<Case> {
    let mut out = Vec::new();
    let mut push = |name: &str, triple: TripleData, module: LieModuleData| out.push(Case { name: name.into(), triple, module });
    let sl2sq = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2());
    let t = TripleData::build(&sl2sq, &[unit(0), unit(3)], &[unit(0), unit(1), unit(2)]).unwrap();
    push("sl2×sl2 / torus / first factor / trivial", t.clone(), LieModuleData::trivial(6, 1));
    push("sl2×sl2 / torus / first factor / adjoint", t, LieModuleData::adjoint(&sl2sq));
    let h = heisenberg();
    let t = TripleData::build(&h, &[], &[unit(1), unit(2)]).unwrap();
    push("heisenberg / 0 / ⟨y,z⟩ / trivial", t.clone(), LieModuleData::trivial(3, 1));
    push("heisenberg / 0 / ⟨y,z⟩ / adjoint", t, LieModuleData::adjoint(&h));
    let t = TripleData::build(&h, &[], &[unit(2)]).unwrap();
    push("heisenberg / 0 / centre / trivial", t, LieModuleData::trivial(3, 1));
    let b = sl2_borel();
    let t = TripleData::build(&b, &[], &[unit(1)]).unwrap();
    push("sl2 borel / 0 / e / trivial", t.clone(), LieModuleData::trivial(2, 1));
    push("sl2 borel / 0 / e / adjoint", t, LieModuleData::adjoint(&b));
    let gl2 = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::abelian(1));
    let t = TripleData::build(&gl2, &[unit(0)], &[unit(3)]).unwrap();
    push("sl2⊕ℚ / h / centre / trivial", t, LieModuleData::trivial(4, 1));
    for s in A2_SUPPORTS {
        let inst = bk(CartanType::A(2), &[], s);
        let n = inst.g_k().dim();
        push(&format!("A2 BK t={s:?} / trivial"), inst.triple().clone(), LieModuleData::trivial(n, 1));
    }
    let inst = bk(CartanType::A(2), &[], &[1]);
    push("A2 BK t=[1] / adjoint of g_K", inst.triple().clone(), LieModuleData::adjoint(inst.g_k()));
    out
}

struct Verified {
    name: String,
    trivial: bool,
    report: VerificationReport,
    psi_products: Option<Vec<String>>,
}

/// Builds and verifies the corpus once; returns it with the time it took.
fn corpus() -> &'static (Vec<Verified>, Duration) {
    static CORPUS: OnceLock<(Vec<Verified>, Duration)> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let opts = CheckOptions { sample_limit: 64, seed: 0 };
        let out = spectral_cases()
            .into_iter()
            .map(|c| {
                let hs = HochschildSerre::build(&c.triple, &c.module, None).unwrap();
                let trivial = c.module.dim() == 1 && c.module.is_trivial();
                let psi_products = trivial.then(|| {
                    hs.check_psi_products(&ModulePairing::trivial(c.triple.blocks().total())).unwrap_or_else(|e| vec![e.to_string()])
                });
                Verified { name: c.name, trivial, report: hs.verify(&opts), psi_products }
            })
            .collect();
        (out, start.elapsed())
    })
}

fn named_failures(names: &[&str]) -> (Vec<String>, usize) {
    let (cases, _) = corpus();
    let mut failures = Vec::new();
    for v in cases {
        for &n in names {
            match v.report.get(n) {
                Some(c) if c.passed => {}
                Some(c) => failures.push(format!("{}: {n}: {:?}", v.name, c.failures)),
                None => failures.push(format!("{}: check {n} missing", v.name)),
            }
        }
    }
    (failures, cases.len())
}

#[test]
fn criterion_2_restriction_maps() {
    let start = Instant::now();
    let (failures, n) = named_failures(&["restriction_map", "lift_stability"]);
    let budget = corpus().1 + Duration::from_secs(30);
    gate(2, start, Some(budget), failures, &format!("ker s_p = F_(p+1), im s_p = target, s∘lift = id on {n} triples"));
}

#[test]
fn criterion_3_pages_and_comparison_maps() {
    let start = Instant::now();
    let (failures, n) = named_failures(&["d0_vertical", "e1", "d1", "lift_differential", "psi", "convergence", "pages.next_page"]);
    let budget = corpus().1 + Duration::from_secs(120);
    gate(3, start, Some(budget), failures, &format!("d_0 = (−1)^p d_v, φ on E_1, d_1 = d_+, ψ, Σ E_∞ = H^n on {n} triples"));
}

#[test]
fn criterion_4_quotient_action() {
    let start = Instant::now();
    let (failures, n) = named_failures(&["hq.well_defined", "hq.brackets", "hq.restriction_invariance"]);
    gate(4, start, None, failures, &format!("g/I-action on H^q(I, I_k; M) and invariance of restrictions on {n} triples"));
}

#[test]
fn criterion_5_psi_multiplicative() {
    let start = Instant::now();
    let (cases, _) = corpus();
    let mut failures = Vec::new();
    let mut count = 0;
    for v in cases.iter().filter(|v| v.trivial) {
        count += 1;
        if let Some(f) = &v.psi_products {
            failures.extend(f.iter().map(|x| format!("{}: {x}", v.name)));
        }
    }
    gate(5, start, None, failures, &format!("ψ(ee') = (−1)^(p2 q1) ψ(e)ψ(e') on {count} trivial-coefficient triples"));
}

#[test]
fn criterion_6_bk_borel_families() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for (kind, expected) in [(CartanType::A(1), 2), (CartanType::A(2), 6), (CartanType::A(3), 24)] {
        let rank = kind.rank();
        for mask in 0u32..1 << rank {
            let t: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let inst = bk(kind, &[], &t);
            let a = verify_structure(&inst, &BkOptions::default()).unwrap();
            let r = &a.report;
            count += 1;
            if r.total_dim != expected || r.weyl.min_coset_reps != expected {
                failures.push(format!("{kind} t={t:?}: dim {} vs |W^P| {}", r.total_dim, r.weyl.min_coset_reps));
            }
            if r.degeneration_page != Some(2) {
                failures.push(format!("{kind} t={t:?}: degeneration page {:?}", r.degeneration_page));
            }
            for c in r.checks.failed() {
                failures.push(format!("{kind} t={t:?}: {} {:?}", c.name, c.failures));
            }
        }
    }
    gate(6, start, None, failures, &format!("dim = |W^B| and degeneration at E_2 on {count} A1/A2/A3 instances"));
}

#[test]
fn criterion_7_a2_full_flag_t1() {
    let start = Instant::now();
    let inst = bk(CartanType::A(2), &[], &[1]);
    let a = verify_structure(&inst, &BkOptions { spectral_checks: true, check: CheckOptions::default() }).unwrap();
    let r = &a.report;
    let mut failures: Vec<String> = r.checks.failed().map(|c| format!("{} {:?}", c.name, c.failures)).collect();
    let mut want = |what: &str, ok: bool| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    want("betti (1,0,2,0,2,0,1)", r.betti == [1, 0, 2, 0, 2, 0, 1]);
    want("subalgebra dims (1,1) at degrees (0,2)", r.subalgebra_poincare.as_deref() == Some(&[1, 1][..]));
    want("quotient dims (1,1,1) at degrees (0,2,4)", r.quotient_poincare.as_deref() == Some(&[1, 1, 1][..]));
    want("factorization (1 + q)(1 + q + q^2)", r.factorization().as_deref() == Some("(1 + q)(1 + q + q^2)"));
    let d = a.decomposition.as_ref().expect("tensor decomposition");
    want("ker i* and (A⁺) computed in every degree", d.ker_i_star.len() == r.betti.len() && d.ideal.len() == r.betti.len());
    let exact = d.ker_i_star.iter().zip(&d.ideal).all(|(k, i)| k == i);
    want("ker i* = (A⁺) as subspaces", exact);

    let o = oracle::a2_full_flag_t1();
    let ker_dims: Vec<usize> = d.ker_i_star.iter().map(|k| k.dim()).collect();
    want("oracle Betti", o.betti[..r.betti.len()] == r.betti[..] && o.betti[r.betti.len()..].iter().all(|&x| x == 0));
    want("oracle subalgebra dims", o.subalgebra[..7] == r.subalgebra_dims[..7]);
    want("oracle quotient dims", o.quotient[..7] == r.quotient_dims[..7]);
    want("oracle ker i* dims", o.ker_i_star[..7] == ker_dims[..]);
    want("oracle (A⁺) = ker i*", o.ideal == o.ker_i_star && o.ideal_in_kernel);
    gate(7, start, None, failures, "A2 full flag, t = {1}: A = (1,1), H/(A⁺) = (1,1,1), (1+q)(1+q+q²), ker i* = (A⁺), oracle agrees");
}

#[test]
fn criterion_8_kostant_totals() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for kind in [CartanType::A(2), CartanType::A(3)] {
        let rank = kind.rank();
        for mask in 0u32..1 << rank {
            let levi: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
            let p = ParabolicDatum::new(RootDatum::new(kind).unwrap(), &levi).unwrap();
            for k in supersets_of_levi(&p) {
                let t = kostant_table(&p, &k).unwrap();
                count += 1;
                if !t.total_matches() {
                    failures.push(format!("{kind} I={levi:?} K={k:?}: {} vs {}", t.total, t.expected_total));
                }
            }
        }
    }
    gate(8, start, None, failures, &format!("dim H*(ũ_K)^(l_K) = |W/W_(P_K)| on {count} A2/A3 parabolic pairs"));
}

#[test]
fn criterion_9_report_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hsc"))
            .args(["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1", "--seed", "7", "-q", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(&path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    let mut failures = Vec::new();
    if a != b {
        failures.push("reports differ between runs".into());
    }
    let text = String::from_utf8(a).unwrap();
    match Report::from_json(&text) {
        Ok(rep) if rep.to_json() == text => {}
        Ok(_) => failures.push("re-serialized report differs".into()),
        Err(e) => failures.push(format!("report does not parse: {e}")),
    }
    gate(9, start, None, failures, "bk-verify machine report byte-identical across two runs and round-trips");
}
