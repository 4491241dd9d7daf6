use super::*;
use crate::error::Error;
use num_rational::Ratio;

fn q(p: u64, prec: u32) -> LocalField {
    LocalField::from_descriptor(&FieldDescriptor::new(p, 1, &[-(p as i128), 1], prec)).unwrap()
}

#[test]
fn make_field_examples() {
    let q5 = make_field(5, 1, &[Coefficient::Int(-5), Coefficient::Int(1)], 20).unwrap();
    assert_eq!(q5.e(), 1);
    let k = make_field(3, 1, &[3, 3, 1].map(Coefficient::Int), 30).unwrap();
    assert_eq!(k.e(), 2);
    let bad = make_field(3, 1, &[1, 0, 1].map(Coefficient::Int), 10);
    assert!(matches!(bad, Err(Error::NonEisenstein(_))));
    assert!(matches!(make_field(2, 1, &[-2, 1].map(Coefficient::Int), 10), Err(Error::EvenPrime)));
}

#[test]
fn reducible_unramified_polynomial_is_rejected() {
    // x^2 + 1 is reducible mod 5
    let r = LocalField::with_unram_poly(5, &[1, 0, 1], &[-5, 1].map(Coefficient::Int), 10);
    assert!(matches!(r, Err(Error::ReducibleUnramPoly(_))));
}

#[test]
fn valuation_examples() {
    assert_eq!(q(5, 20).from_int(5).valuation(), Valuation::Finite(1));
    let k = make_field(3, 1, &[3, 3, 1].map(Coefficient::Int), 30).unwrap();
    assert_eq!(k.from_int(3).valuation(), Valuation::Finite(2));
    assert_eq!(k.zero().valuation(), Valuation::Infinite);
}

#[test]
fn descriptor_round_trip_through_field() {
    let d = FieldDescriptor::new(3, 2, &[3, 3, 1], 30);
    let json = d.to_json();
    let k = LocalField::from_descriptor(&FieldDescriptor::from_json(&json).unwrap()).unwrap();
    assert_eq!(k.descriptor().to_json(), json);
}

#[test]
fn e0_and_cyclotomic_invariants() {
    let q3 = q(3, 40);
    let (k1, _) = cyclotomic_extend(&q3, 1, 16).unwrap();
    let (k2, _) = cyclotomic_extend(&k1, 2, 16).unwrap();
    assert_eq!(e0(&k2), Ratio::from_integer(3));
    assert_eq!(invariant_r(&k2), (1, 2));
    assert_eq!(invariant_m(&k2, 6).unwrap(), Capped::exact(2));
    assert_eq!(invariant_mur(&k2, &Caps::default()).unwrap(), Capped::exact(2));
    assert!(invariant_m(&k2, 2).unwrap().cap_reached);
}

#[test]
fn q5_tower_to_zeta25() {
    let q5 = q(5, 40);
    let (k1, _) = cyclotomic_extend(&q5, 1, 16).unwrap();
    assert_eq!((k1.e(), invariant_m(&k1, 6).unwrap().value), (4, 1));
    let (k2, _) = cyclotomic_extend(&k1, 2, 20).unwrap();
    assert_eq!(k2.e(), 20);
    assert_eq!(invariant_m(&k2, 6).unwrap().value, 2);
}
