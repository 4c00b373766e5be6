use std::time::Instant;

use hsc_core::bk::{verify_structure, BKInstance, BkOptions, CartanType, ParabolicDatum, RootDatum};

fn all_supports(m: usize) -> Vec<Vec<usize>> {
    (0..1u32 << m).map(|b| (1..=m).filter(|&i| b >> (i - 1) & 1 == 1).collect()).collect()
}

fn check_borel(kind: CartanType, expected: usize) {
    let root = RootDatum::new(kind).unwrap();
    let p = ParabolicDatum::new(root, &[]).unwrap();
    for t in all_supports(p.m()) {
        let start = Instant::now();
        let inst = BKInstance::build(p.clone(), &t).unwrap();
        let a = verify_structure(&inst, &BkOptions::default()).unwrap();
        let r = &a.report;
        let failed: Vec<_> = r.checks.failed().map(|c| (&c.name, &c.failures)).collect();
        assert!(failed.is_empty(), "{kind} t={t:?}: {failed:?}");
        assert_eq!(r.total_dim, expected);
        assert_eq!(r.degeneration_page, Some(2));
        eprintln!("{kind} t={t:?} {:?} {:?}", r.betti, start.elapsed());
    }
}

#[test]
fn a1_and_a2_borel() {
    check_borel(CartanType::A(1), 2);
    check_borel(CartanType::A(2), 6);
}

#[test]
fn a3_borel() {
    check_borel(CartanType::A(3), 24);
}

#[test]
fn a3_with_spectral_checks() {
    let p = ParabolicDatum::new(RootDatum::new(CartanType::A(3)).unwrap(), &[]).unwrap();
    let opts = BkOptions { spectral_checks: true, ..Default::default() };
    for t in [vec![], vec![2]] {
        let start = Instant::now();
        let a = verify_structure(&BKInstance::build(p.clone(), &t).unwrap(), &opts).unwrap();
        let failed: Vec<_> = a.report.checks.failed().map(|c| (&c.name, &c.failures)).collect();
        assert!(failed.is_empty(), "t={t:?}: {failed:?}");
        eprintln!("spectral t={t:?} {:?}", start.elapsed());
    }
}
