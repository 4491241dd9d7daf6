//! Smith-normal-form coinvariants and invariants against exhaustive
//! enumeration of small modules.

use proptest::prelude::*;
use ramlock::galmod::*;

/// Random generators with entries valid for the type vector; modules that
/// fail validation (non-invertible mod p) are discarded by the caller.
fn module_strategy() -> impl Strategy<Value = Option<FiniteGaloisModule>> {
    (prop_oneof![Just(3u64), Just(5)], 1u32..=2, 1usize..=2, 1usize..=2)
        .prop_flat_map(|(p, level, rank, gens)| {
            let types = proptest::collection::vec(1..=level, rank);
            let entries = proptest::collection::vec(0u64..p.pow(level), gens * rank * rank);
            (Just(p), Just(level), Just(rank), Just(gens), types, entries)
        })
        .prop_map(|(p, level, rank, gens, types, entries)| {
            let generators: Vec<Vec<Vec<u64>>> = (0..gens)
                .map(|g| {
                    (0..rank)
                        .map(|i| {
                            (0..rank)
                                .map(|j| {
                                    let need = types[i].saturating_sub(types[j]);
                                    // force well-definedness by scaling
                                    entries[g * rank * rank + i * rank + j] * p.pow(need)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            FiniteGaloisModule::new(p, level, types, generators).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coinvariants_match_exhaustion(m in module_strategy()) {
        if let Some(m) = m {
            prop_assert_eq!(Some(coinvariants(&m)), brute::coinvariants(&m, 1 << 16));
            prop_assert_eq!(Some(invariants_sub(&m)), brute::invariants(&m, 1 << 16));
        }
    }

    #[test]
    fn cyclic_action_has_equal_invariant_and_coinvariant_orders(m in module_strategy()) {
        if let Some(m) = m {
            if m.generators.len() == 1 {
                prop_assert_eq!(coinvariants(&m).order(), invariants_sub(&m).order());
            }
        }
    }

    #[test]
    fn rank_one_families(p in prop_oneof![Just(3u64), Just(5)], n in 1u32..=5, seed in 0u64..10_000) {
        let modn = p.pow(n);
        let v = 1 + (seed % (modn - 1));
        prop_assume!(v % p != 0);
        let m = rank1_module(p, n, &[v]).unwrap();
        let want = AbGroup::cyclic(p, rank1_coinvariant_level(p, n, &[v]));
        prop_assert_eq!(&coinvariants(&m), &want);
        if m.order() <= 1 << 12 {
            prop_assert_eq!(brute::coinvariants(&m, 1 << 12).unwrap(), want);
        }
    }

    #[test]
    fn group_structure_algebra(a in proptest::collection::vec(0u32..4, 0..4), b in proptest::collection::vec(0u32..4, 0..4)) {
        let ga = AbGroup::from_exponents(3, &a);
        let gb = AbGroup::from_exponents(3, &b);
        prop_assert_eq!(ga.direct_sum(&gb), gb.direct_sum(&ga));
        prop_assert_eq!(ga.direct_sum(&gb).order(), ga.order() * gb.order());
        prop_assert!(ga.divides(&ga));
        prop_assert!(ga.divides(&ga.direct_sum(&gb)));
    }
}

#[test]
fn claim1_grid_against_exhaustion() {
    for p in [3u64, 5] {
        for big_m in 1..=3u32 {
            for n in 0..big_m {
                for u in (1..p.pow(big_m - n)).filter(|u| u % p != 0).take(5) {
                    let b = p.pow(n) * u;
                    let st = serre_tate_module(p, big_m, b).unwrap();
                    let exhaustive = brute::image_in_coinvariants(&st, &[vec![1, 0]], 1 << 20).unwrap();
                    assert_eq!(claim1_image(p, big_m, n, b).unwrap(), exhaustive);
                    assert_eq!(exhaustive, AbGroup::cyclic(p, n));
                }
            }
        }
    }
}

#[test]
fn semisimplicity_against_explicit_complements() {
    // diag(1, 4) at level 2 is semisimple; [[1, 3], [0, 1]] is not
    let d = FiniteGaloisModule::homogeneous(3, 2, vec![vec![vec![1, 0], vec![0, 4]]]).unwrap();
    assert!(semisimplicity_check(&d).unwrap());
    assert!(brute::invariant_cyclic_subgroups(&d).iter().filter(|s| s.len() == 9).count() >= 2);
    let u = serre_tate_module(3, 2, 3).unwrap();
    assert!(!semisimplicity_check(&u).unwrap());
}
