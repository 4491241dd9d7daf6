mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ramlock::fp;
use ramlock::localfield::Caps;
use ramlock::unitsymbols::{pairing_order_formula, FiltrationLevel, HilbertPairing};

#[test]
fn symbol_matches_norm_oracle_q3_zeta3() {
    let k = common::q3_zeta3();
    let h = HilbertPairing::new(&k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..15 {
        let x = common::random_element(&k, &mut rng);
        let y = common::random_element(&k, &mut rng);
        let cy = h.space().coords(&y).unwrap();
        let is_norm = if cy.iter().all(|&c| c == 0) {
            true
        } else {
            let span = common::norm_span(h.space(), &y, &mut rng);
            fp::in_span(&span, &h.space().coords(&x).unwrap(), 3)
        };
        assert_eq!(h.symbol(&x, &y).unwrap() == 0, is_norm);
    }
}

#[test]
fn pairing_over_q5_zeta5_is_antisymmetric_and_perfect() {
    let k = common::q5_zeta5();
    let h = HilbertPairing::new(&k).unwrap();
    assert_eq!(h.space().dim(), 6);
    assert_eq!(fp::rank(h.matrix(), 5), 6);
}

#[test]
fn order_table_q3_zeta9_matches_formula() {
    let k = common::q3_zeta9();
    let h = HilbertPairing::new(&k).unwrap();
    for i in 1..=9 {
        for j in 1..=9 {
            if i % 3 == 0 && j % 3 == 0 {
                continue;
            }
            assert_eq!(h.pairing_order(i, j).unwrap(), pairing_order_formula(&k, i, j), "({i},{j})");
        }
    }
    assert_eq!(h.pairing_order(1, 8).unwrap(), 3);
}

#[test]
fn kummer_root_levels_over_q5_zeta5() {
    let k = common::q5_zeta5();
    let one = k.one();
    for i in 1..5u32 {
        let x = &one + &k.pi().pow(i as i64).unwrap();
        let caps = Caps { degree_cap: 20, ..Caps::default() };
        let r = ramlock::unitsymbols::kummer_root_level(&k, &x, &caps).unwrap();
        assert_eq!(r.level, FiltrationLevel::Level(i));
    }
}
