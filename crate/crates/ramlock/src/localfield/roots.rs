//! Roots of polynomials lying in the base field.
//!
//! Newton-polygon slopes select the candidate valuations; for each integral
//! slope the scaled polynomial is searched digit by digit. A residue root of
//! multiplicity one is lifted by Newton iteration; a repeated residue root is
//! re-centred (x <- r + pi x') and the search recurses.

use super::poly::{self, newton_polygon, Poly};
use super::residue::Fq;
use super::{FieldElement, LocalField};
use crate::error::{Error, Result};

/// All roots of `poly` in k, each listed once.
pub fn root_find(k: &LocalField, poly: &[FieldElement]) -> Result<Vec<FieldElement>> {
    root_find_filtered(k, poly, None)
}

/// Roots of valuation at least `min_val` (all roots when `None`).
pub fn root_find_filtered(
    k: &LocalField,
    poly: &[FieldElement],
    min_val: Option<i64>,
) -> Result<Vec<FieldElement>> {
    let mut p: Poly = poly.to_vec();
    for c in &p {
        if c.is_indistinguishable_from_zero() && c.abs_prec() < k.prec() as i64 {
            return Err(Error::PrecisionExhausted(format!(
                "coefficient known only to O(pi^{})",
                c.abs_prec()
            )));
        }
    }
    poly::trim(&mut p);
    if p.is_empty() {
        return Err(Error::PrecisionExhausted("polynomial vanishes to precision".into()));
    }
    let mut roots = vec![];
    let lead_zeros = p.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(k.zero());
        p.drain(..lead_zeros);
    }
    if p.len() <= 1 {
        return Ok(roots);
    }
    let vals: Vec<Option<i64>> = p.iter().map(|c| c.valuation().finite()).collect();
    for seg in newton_polygon(&vals) {
        if !seg.root_valuation.is_integer() {
            continue;
        }
        let lambda = seg.root_valuation.to_integer();
        if min_val.is_some_and(|m| lambda < m) {
            continue;
        }
        let shift = vals[seg.start].unwrap() + lambda * seg.start as i64;
        let scaled: Poly = poly::substitute_pi_power(&p, lambda)
            .iter()
            .map(|c| c.shift(-shift))
            .collect();
        let rf = k.residue_field();
        let reduced = residue_poly(&scaled)?;
        for (r, mult) in rf.roots_with_multiplicity(&reduced) {
            if rf.is_zero(&r) {
                continue;
            }
            let lifted = k.lift_residue(&r);
            for x in search(k, &scaled, &lifted, mult, 0)? {
                roots.push(x.shift(lambda));
            }
        }
    }
    debug_assert!(roots.len() < poly.len());
    Ok(roots)
}

fn residue_poly(p: &[FieldElement]) -> Result<Vec<Fq>> {
    p.iter().map(|c| c.residue()).collect()
}

/// Roots of the integral polynomial `q` congruent to `r` modulo pi, where
/// the residue of r is a root of multiplicity `mult` of q mod pi.
fn search(
    k: &LocalField,
    q: &[FieldElement],
    r: &FieldElement,
    mult: usize,
    depth: u32,
) -> Result<Vec<FieldElement>> {
    if mult == 1 {
        return Ok(vec![newton_lift(q, r)?]);
    }
    if depth > k.cap() {
        return Err(Error::PrecisionExhausted("root cluster does not separate".into()));
    }
    // R(Y) = Q(r + pi Y)
    let shifted = poly::substitute_pi_power(&poly::taylor_shift(q, r), 1);
    let content = shifted
        .iter()
        .filter_map(|c| c.val_raw().filter(|&v| v < c.abs_prec()))
        .min();
    let Some(content) = content else {
        return Err(Error::PrecisionExhausted(format!(
            "{mult} roots agree to the available precision"
        )));
    };
    let rq: Poly = shifted.iter().map(|c| c.shift(-content)).collect();
    // Coefficients known only to O(pi^a) with a <= 0 make the residue
    // polynomial undetermined.
    if rq.iter().any(|c| c.is_indistinguishable_from_zero() && c.abs_prec() <= 0) {
        return Err(Error::PrecisionExhausted(format!(
            "{mult} roots agree to the available precision"
        )));
    }
    let reduced = residue_poly(&rq)?;
    let rf = k.residue_field();
    let mut out = vec![];
    for (s, m) in rf.roots_with_multiplicity(&reduced) {
        let lifted = k.lift_residue(&s);
        for y in search(k, &rq, &lifted, m, depth + 1)? {
            out.push(r + &y.shift(1));
        }
    }
    Ok(out)
}

/// Newton iteration from a simple residue root.
fn newton_lift(q: &[FieldElement], x0: &FieldElement) -> Result<FieldElement> {
    let dq = poly::derivative(q);
    let mut x = x0.clone();
    let k = x0.field().clone();
    for _ in 0..(2 * k.cap().max(2).ilog2() + 4) {
        let fx = poly::eval(q, &x);
        if fx.is_indistinguishable_from_zero() {
            break;
        }
        let dfx = poly::eval(&dq, &x);
        if dfx.val_raw() != Some(0) {
            return Err(Error::PrecisionExhausted(
                "derivative lost its unit digit during lifting".into(),
            ));
        }
        let step = fx.div(&dfx)?;
        let next = &x - &step;
        if step.is_indistinguishable_from_zero() {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::descriptor::FieldDescriptor;
    use super::super::poly::from_ints;
    use super::*;

    fn field(p: u64, eis: &[i128], prec: u32) -> LocalField {
        LocalField::from_descriptor(&FieldDescriptor::new(p, 1, eis, prec)).unwrap()
    }

    #[test]
    fn square_roots_of_one_in_q5() {
        let k = field(5, &[-5, 1], 20);
        let roots = root_find(&k, &from_ints(&k, &[-1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|r| r.eq_prec(&k.one())));
        assert!(roots.iter().any(|r| r.eq_prec(&k.from_int(-1))));
    }

    #[test]
    fn cube_roots_of_unity_absent_from_q5() {
        let k = field(5, &[-5, 1], 20);
        let roots = root_find(&k, &from_ints(&k, &[1, 1, 1])).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn primitive_cube_roots_in_q3_zeta3() {
        let k = field(3, &[3, 3, 1], 30);
        let roots = root_find(&k, &from_ints(&k, &[1, 1, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.pow(3).unwrap().eq_prec(&k.one()));
            assert!(!r.eq_prec(&k.one()));
        }
    }

    #[test]
    fn roots_with_valuation() {
        // (x - 5)(x - 25)(x + 1) over Q_5
        let k = field(5, &[-5, 1], 20);
        let p = poly::from_roots(&k, &[k.from_int(5), k.from_int(25), k.from_int(-1)]);
        let mut roots = root_find(&k, &p).unwrap();
        roots.sort_by_key(|r| r.valuation());
        assert_eq!(roots.len(), 3);
        assert!(roots[0].eq_prec(&k.from_int(-1)));
        assert!(roots[1].eq_prec(&k.from_int(5)));
        assert!(roots[2].eq_prec(&k.from_int(25)));
        let deep = root_find_filtered(&k, &p, Some(1)).unwrap();
        assert_eq!(deep.len(), 2);
    }

    #[test]
    fn close_roots_are_separated() {
        // (x - 1)(x - 1 - 3^4) over Q_3
        let k = field(3, &[-3, 1], 30);
        let p = poly::from_roots(&k, &[k.from_int(1), k.from_int(82)]);
        let roots = root_find(&k, &p).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn no_roots_when_slope_fractional() {
        let k = field(3, &[-3, 1], 20);
        assert!(root_find(&k, &from_ints(&k, &[-3, 0, 1])).unwrap().is_empty());
    }
}
