//! Basis-independence and counting invariants under random inputs.

use hsc_core::bk::{verify_structure, BKInstance, BkOptions, CartanType, ParabolicDatum, RootDatum};
use hsc_core::cochains::{cohomology, square_zero_failures};
use hsc_core::lie::{LieAlgebraData, LieModuleData, PairData, TripleData};
use hsc_core::linalg::{solve, RationalMatrix, SparseVec};
use hsc_core::spectral::{CheckOptions, HochschildSerre};
use hsc_core::Rational;
use proptest::prelude::*;

fn algebras() -> Vec<LieAlgebraData> {
    vec![
        LieAlgebraData::sl2(),
        LieAlgebraData::from_int_constants(3, &[(0, 1, &[(2, 1)])]).unwrap(),
        LieAlgebraData::from_int_constants(2, &[(0, 1, &[(1, 2)])]).unwrap(),
        LieAlgebraData::sl2().direct_sum(&LieAlgebraData::abelian(1)),
        LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2()),
    ]
}

/// A permuted unitriangular change of basis built from `seed` entries.
fn change_of_basis(n: usize, perm_seed: &[usize], entries: &[i64]) -> RationalMatrix {
    let mut order: Vec<usize> = (0..n).collect();
    for (i, s) in perm_seed.iter().enumerate().take(n) {
        order.swap(i, i + s % (n - i));
    }
    let mut it = entries.iter().cycle();
    let cols = (0..n)
        .map(|j| {
            let mut v = SparseVec::unit(order[j]);
            for i in 0..j {
                let c = *it.next().unwrap();
                v = v.add(&SparseVec::unit(order[i]).scale(&Rational::from_int(c)));
            }
            v
        })
        .collect();
    RationalMatrix::from_columns(n, cols)
}

fn new_coords(p: &RationalMatrix, v: &SparseVec) -> SparseVec {
    solve(p, v).expect("invertible")
}

fn betti_absolute(g: &LieAlgebraData) -> Vec<usize> {
    let (_, ring) = cohomology(&PairData::absolute(g), &LieModuleData::trivial(g.dim(), 1), None).unwrap();
    ring.betti()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn betti_numbers_ignore_the_basis(
        which in 0usize..5,
        perm in prop::collection::vec(0usize..8, 6),
        entries in prop::collection::vec(-2i64..=2, 1..12),
        seed in any::<u64>(),
    ) {
        let g = &algebras()[which];
        let p = change_of_basis(g.dim(), &perm, &entries);
        let h = g.rebase(&p).unwrap();
        prop_assert_eq!(betti_absolute(g), betti_absolute(&h));
        let ops = hsc_core::cochains::CeOperators::new(&h, &LieModuleData::adjoint(&h)).unwrap();
        prop_assert!(square_zero_failures(&ops, 12, seed).is_empty());
    }

    #[test]
    fn spectral_pages_ignore_the_basis(
        perm in prop::collection::vec(0usize..8, 6),
        entries in prop::collection::vec(-1i64..=1, 1..8),
        seed in any::<u64>(),
    ) {
        // sl2 × sl2 with the torus and the first factor as ideal.
        let g = LieAlgebraData::sl2().direct_sum(&LieAlgebraData::sl2());
        let unit = SparseVec::unit;
        let (k, ideal) = (vec![unit(0), unit(3)], vec![unit(0), unit(1), unit(2)]);
        let t0 = TripleData::build(&g, &k, &ideal).unwrap();
        let p = change_of_basis(6, &perm, &entries);
        let h = g.rebase(&p).unwrap();
        let map = |vs: &[SparseVec]| vs.iter().map(|v| new_coords(&p, v)).collect::<Vec<_>>();
        let t1 = TripleData::build(&h, &map(&k), &map(&ideal)).unwrap();
        let a = HochschildSerre::build(&t0, &LieModuleData::trivial(6, 1), None).unwrap();
        let b = HochschildSerre::build(&t1, &LieModuleData::trivial(6, 1), None).unwrap();
        prop_assert_eq!(a.betti(), b.betti());
        let (sa, sb) = (a.pages().summary(), b.pages().summary());
        prop_assert_eq!(&sa.dims, &sb.dims);
        prop_assert_eq!(&sa.infinity_dims, &sb.infinity_dims);
        let rep = b.verify(&CheckOptions { sample_limit: 16, seed });
        let failed: Vec<_> = rep.failed().map(|c| c.name.clone()).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
    }

    #[test]
    fn bk_dimension_counts_cosets(kind in 0usize..5, levi_mask in 0u32..8, t_mask in 0u32..8) {
        let kind = [CartanType::A(1), CartanType::A(2), CartanType::A(3), CartanType::B2, CartanType::G2][kind];
        let rank = kind.rank();
        let levi: Vec<usize> = (0..rank).filter(|i| levi_mask >> i & 1 == 1).collect();
        let p = ParabolicDatum::new(RootDatum::new(kind).unwrap(), &levi).unwrap();
        let t: Vec<usize> = (0..p.m()).filter(|i| t_mask >> i & 1 == 1).map(|i| i + 1).collect();
        let inst = BKInstance::build(p, &t).unwrap();
        let r = verify_structure(&inst, &BkOptions::default()).unwrap().report;
        prop_assert_eq!(r.total_dim, r.weyl.min_coset_reps);
        prop_assert_eq!(r.degeneration_page, Some(2));
        prop_assert_eq!(r.subalgebra_dims.iter().sum::<usize>(), r.weyl.k_over_levi);
        let failed: Vec<_> = r.checks.failed().map(|c| c.name.clone()).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
    }
}
