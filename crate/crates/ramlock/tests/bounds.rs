//! Report-level properties: sandwich order, aggregation algebra, JSON
//! round trips and the triviality criterion on the corpus.

use proptest::prelude::*;
use ramlock::bounds::*;
use ramlock::corpus;
use ramlock::galmod::AbGroup;
use ramlock::Error;

fn budget() -> Budget {
    let mut b = Budget::default();
    b.caps.degree_cap = corpus::CORPUS_DEGREE_CAP;
    b
}

fn report_strategy() -> impl Strategy<Value = BoundReport> {
    (1u32..3, 0u32..3, 0u32..3).prop_map(|(g, n, extra)| abstract_bounds(3, g, n, n + extra).unwrap())
}

proptest! {
    #[test]
    fn abstract_reports_are_ordered(g in 1u32..4, n in 0u32..4, mur in 0u32..4) {
        match abstract_bounds(5, g, n, mur) {
            Ok(r) => {
                prop_assert!(n <= mur);
                prop_assert!(r.check_order().is_ok());
                prop_assert_eq!(r.bounds.lower.divisors().len(), if n == 0 { 0 } else { g as usize });
                prop_assert_eq!(r.bounds.exact.is_some(), n == mur);
            }
            Err(e) => prop_assert_eq!(e, Error::OrderViolation { n, mur }),
        }
    }

    #[test]
    fn aggregation_is_commutative_and_associative(
        a in report_strategy(),
        b in report_strategy(),
        c in report_strategy(),
    ) {
        let ab = product_aggregate(&[a.clone(), b.clone()]).unwrap();
        let ba = product_aggregate(&[b.clone(), a.clone()]).unwrap();
        prop_assert_eq!(&ab.bounds, &ba.bounds);
        prop_assert_eq!(ab.invariants.g, a.invariants.g + b.invariants.g);
        let left = product_aggregate(&[ab, c.clone()]).unwrap();
        let right = product_aggregate(&[a.clone(), product_aggregate(&[b.clone(), c.clone()]).unwrap()]).unwrap();
        let flat = product_aggregate(&[a, b, c]).unwrap();
        prop_assert_eq!(&left.bounds.lower, &right.bounds.lower);
        prop_assert_eq!(&left.bounds.upper, &right.bounds.upper);
        prop_assert_eq!(&left.bounds.exact, &right.bounds.exact);
        prop_assert_eq!(&left.bounds.upper, &flat.bounds.upper);
        prop_assert!(flat.check_order().is_ok());
    }

    #[test]
    fn reports_round_trip(r in report_strategy(), seed in any::<u64>()) {
        let mut r = r;
        r.seed = seed;
        prop_assert_eq!(BoundReport::from_json(&r.to_json()).unwrap(), r);
    }
}

#[test]
fn corpus_reports_are_ordered_and_round_trip() {
    for inst in corpus::instances().unwrap() {
        let e = &inst.curve;
        let r = match curve_bounds(e, &budget()) {
            Ok(r) => r,
            Err(Error::TorsionHypothesisFails(_)) => georam_bounds(e, &budget()).unwrap(),
            Err(err) => panic!("{}: {err}", inst.name),
        };
        r.check_order().unwrap();
        assert_eq!(BoundReport::from_json(&r.to_json()).unwrap(), r, "{}", inst.name);
        if georam_applies(e.field()) {
            assert_eq!(r.bounds.exact, Some(AbGroup::trivial()), "{}", inst.name);
        }
        let inv = &r.invariants;
        let (n, m, mur, nh) = (inv.n.unwrap(), inv.m.unwrap(), inv.mur.unwrap(), inv.nhat.unwrap());
        assert!(n <= m && m <= mur && n <= nh && nh <= mur, "{}: {inv:?}", inst.name);
    }
}

#[test]
fn product_of_corpus_curves() {
    let k = corpus::q3_zeta3(40).unwrap();
    let e1 = ramlock::elliptic::WeierstrassCurve::from_ints(&k, [0, 4, 0, 2, 0]).unwrap();
    let r1 = ordinary_bounds(&e1, &budget()).unwrap();
    let both = product_aggregate(&[r1.clone(), r1.clone()]).unwrap();
    assert_eq!(both.bounds.exact, Some(AbGroup::from_divisors([3, 3])));
    let other = curve_bounds(&corpus::cm_curve(0).unwrap(), &budget()).unwrap();
    assert_eq!(product_aggregate(&[r1, other]).unwrap_err(), Error::FieldMismatch);
}

#[test]
fn ozeki_tower_on_the_cm_curve() {
    let e = corpus::cm_curve(0).unwrap();
    let t = ozeki_tower(&e, 2, &budget()).unwrap();
    assert!(t.stopped.is_none());
    let rows: Vec<(u32, u32, u32)> = t.rows.iter().map(|r| (r.m, r.big_m, r.n)).collect();
    assert_eq!(rows, vec![(1, 1, 0), (2, 2, 0)]);
    assert!(t.rows[1].gap >= t.rows[0].gap);
}
