//! Reduction type by exhaustive point count over the residue field, cross-checked
//! by the degree of the p-division polynomial mod p.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::WeierstrassCurve;
use super::divpoly::{division_polys, FqArith};
use crate::error::{Error, Result};
use crate::localfield::residue::Fq;

/// Largest residue field that is counted exhaustively.
pub const DEFAULT_Q_BOUND: u128 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    GoodOrdinary,
    GoodSupersingular,
    NotGood,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionData {
    pub kind: ReductionKind,
    /// #E-bar(F_q); absent for bad reduction.
    pub point_count: Option<u128>,
    pub trace: Option<i128>,
}

pub fn reduction_type(e: &WeierstrassCurve) -> Result<ReductionData> {
    reduction_type_bounded(e, DEFAULT_Q_BOUND)
}

pub fn reduction_type_bounded(e: &WeierstrassCurve, q_bound: u128) -> Result<ReductionData> {
    if !e.has_good_reduction() {
        return Ok(ReductionData { kind: ReductionKind::NotGood, point_count: None, trace: None });
    }
    let q = e.field().q();
    if q > q_bound {
        return Err(Error::ResidueFieldTooLarge(q));
    }
    let count = count_points(e)?;
    let trace = q as i128 + 1 - count as i128;
    debug_assert!(trace * trace <= 4 * q as i128, "Hasse bound");
    let by_trace = trace.rem_euclid(e.p() as i128) == 0;
    let by_divpoly = !ordinary_by_division_polynomial(e)?;
    if by_trace != by_divpoly {
        return Err(Error::InconsistentInput(format!(
            "supersingularity tests disagree (trace {trace})"
        )));
    }
    let kind = if by_trace {
        ReductionKind::GoodSupersingular
    } else {
        ReductionKind::GoodOrdinary
    };
    Ok(ReductionData { kind, point_count: Some(count), trace: Some(trace) })
}

/// #E-bar(F_q) including the point at infinity.
pub fn count_points(e: &WeierstrassCurve) -> Result<u128> {
    let rf = e.field().residue_field();
    let [a1, a2, a3, a4, a6] = e.reduced_coefficients()?;
    let q = rf.order();
    let half = (q - 1) / 2;
    let four = rf.from_int(4);
    let affine: u128 = (0..q)
        .into_par_iter()
        .map(|i| {
            let x = rf.from_index(i);
            // (2y + a1 x + a3)^2 = (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
            let h = rf.add(&rf.mul(&a1, &x), &a3);
            let x2 = rf.mul(&x, &x);
            let g = [rf.mul(&x2, &x), rf.mul(&a2, &x2), rf.mul(&a4, &x), a6.clone()]
                .iter()
                .fold(rf.zero(), |acc, t| rf.add(&acc, t));
            let d = rf.add(&rf.mul(&h, &h), &rf.mul(&four, &g));
            if rf.is_zero(&d) {
                1
            } else if rf.pow(&d, half) == rf.one() {
                2
            } else {
                0
            }
        })
        .sum();
    Ok(affine + 1)
}

/// E-bar is ordinary iff f_p mod p has positive degree (E-bar[p] has
/// nonzero points over the algebraic closure).
pub fn ordinary_by_division_polynomial(e: &WeierstrassCurve) -> Result<bool> {
    let rf = e.field().residue_field();
    let b: Vec<Fq> = e.b().iter().map(|c| c.residue()).collect::<Result<_>>()?;
    let b = [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()];
    let p = e.p() as usize;
    let fp = division_polys(&FqArith(rf), &b, p).swap_remove(p);
    let degree = fp.iter().rposition(|c| !rf.is_zero(c));
    match degree {
        None => Err(Error::InconsistentInput("p-division polynomial vanishes mod p".into())),
        Some(d) => Ok(d > 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{make_field, Coefficient, LocalField};

    fn qp(p: u64) -> LocalField {
        make_field(p, 1, &[Coefficient::Int(-(p as i128)), Coefficient::Int(1)], 30).unwrap()
    }

    #[test]
    fn corpus_reduction_types() {
        let e = WeierstrassCurve::from_ints(&qp(5), [0, 0, 0, -1, 0]).unwrap();
        let r = reduction_type(&e).unwrap();
        assert_eq!(r.kind, ReductionKind::GoodOrdinary);
        assert_eq!((r.point_count, r.trace), (Some(8), Some(-2)));

        let e = WeierstrassCurve::from_ints(&qp(3), [0, 0, 0, 1, 0]).unwrap();
        let r = reduction_type(&e).unwrap();
        assert_eq!(r.kind, ReductionKind::GoodSupersingular);
        assert_eq!((r.point_count, r.trace), (Some(4), Some(0)));

        let e = WeierstrassCurve::from_ints(&qp(5), [0, 0, 0, 0, -5]).unwrap();
        assert_eq!(reduction_type(&e).unwrap().kind, ReductionKind::NotGood);
    }

    #[test]
    fn residue_bound_is_enforced() {
        let e = WeierstrassCurve::from_ints(&qp(5), [0, 0, 0, -1, 0]).unwrap();
        assert_eq!(reduction_type_bounded(&e, 4), Err(Error::ResidueFieldTooLarge(5)));
    }

    #[test]
    fn count_matches_naive_enumeration() {
        let k = qp(7);
        let e = WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 5]).unwrap();
        let mut naive = 1;
        for x in 0..7i64 {
            for y in 0..7i64 {
                let l = y * y + x * y + 3 * y;
                let r = x * x * x + 2 * x * x + 4 * x + 5;
                if (l - r).rem_euclid(7) == 0 {
                    naive += 1;
                }
            }
        }
        if e.has_good_reduction() {
            assert_eq!(count_points(&e).unwrap(), naive);
        }
    }
}
