//! The etale lift H_N of E-bar[p^N] inside E[p^N], and Velu's quotient for
//! N = 1.

use super::curve::{Point, WeierstrassCurve};
use super::reduction::{reduction_type, ReductionKind};
use super::torsion::{torsion_level_n, torsion_points};
use crate::error::{Error, Result};
use crate::localfield::FieldElement;

#[derive(Clone, Debug)]
pub struct IsogenyKernelData {
    pub level: u32,
    /// H_N, the point at infinity first.
    pub subgroup: Vec<Point>,
    /// E / H_1 (N = 1 only; for N = 0 the curve itself).
    pub quotient: Option<WeierstrassCurve>,
    /// Image of E[p] in the quotient, the kernel of the dual isogeny.
    pub dual_kernel: Vec<Point>,
}

pub fn isogeny_kernel_data(e: &WeierstrassCurve, level: u32) -> Result<IsogenyKernelData> {
    if level == 0 {
        return Ok(IsogenyKernelData {
            level,
            subgroup: vec![Point::Infinity],
            quotient: Some(e.clone()),
            dual_kernel: vec![Point::Infinity],
        });
    }
    if reduction_type(e)?.kind != ReductionKind::GoodOrdinary {
        return Err(Error::HypothesisViolated(
            "reduction is not ordinary, E-bar[p] = 0 has no etale lift".into(),
        ));
    }
    if level >= 2 {
        return Err(Error::VeluUnsupported(level));
    }
    if torsion_level_n(e, level)?.value < level {
        return Err(Error::HypothesisViolated(format!("E[p^{level}] is not contained in E(k)")));
    }
    let pts = torsion_points(e, 1)?;
    // any point with integral x reduces to a generator of E-bar[p]
    let gen = pts
        .iter()
        .find(|pt| pt.x().is_some_and(|x| x.is_integral()))
        .ok_or_else(|| Error::InconsistentInput("no torsion point reduces to E-bar[p]".into()))?
        .clone();
    let p = e.p();
    let mut subgroup = vec![Point::Infinity];
    let mut cur = gen.clone();
    for _ in 1..p {
        subgroup.push(cur.clone());
        cur = e.add(&cur, &gen)?;
    }
    if !cur.is_infinity() {
        return Err(Error::InconsistentInput("generator does not have order p".into()));
    }
    let velu = Velu::new(e, &subgroup[1..=((p - 1) / 2) as usize])?;
    let quotient = velu.quotient()?;
    if !quotient.has_good_reduction() {
        return Err(Error::InconsistentInput("Velu quotient has bad reduction".into()));
    }
    let mut dual_kernel: Vec<Point> = vec![];
    for pt in &pts {
        let img = velu.image(pt)?;
        if !quotient.is_on_curve(&img) {
            return Err(Error::InconsistentInput("isogeny image is off the quotient".into()));
        }
        if !dual_kernel.iter().any(|q| q.eq_prec(&img)) {
            dual_kernel.push(img);
        }
    }
    if dual_kernel.len() != p as usize {
        return Err(Error::InconsistentInput(format!(
            "dual kernel has {} points, expected {p}",
            dual_kernel.len()
        )));
    }
    Ok(IsogenyKernelData { level, subgroup, quotient: Some(quotient), dual_kernel })
}

/// Velu's formulas for a kernel of odd order, given one point from each
/// pair {Q, -Q}.
struct Velu<'a> {
    e: &'a WeierstrassCurve,
    /// (x_Q, y_Q, g^x_Q, g^y_Q, v_Q, u_Q)
    terms: Vec<[FieldElement; 6]>,
    v: FieldElement,
    w: FieldElement,
}

impl<'a> Velu<'a> {
    fn new(e: &'a WeierstrassCurve, reps: &[Point]) -> Result<Velu<'a>> {
        let k = e.field();
        let [a1, a2, a3, a4, _] = e.a();
        let mut terms = vec![];
        let (mut v, mut w) = (k.zero(), k.zero());
        for q in reps {
            let Point::Affine(xq, yq) = q else {
                return Err(Error::InconsistentInput("kernel representative at infinity".into()));
            };
            let gx = &k.from_int(3) * xq * xq + &k.from_int(2) * a2 * xq + a4.clone() - a1 * yq;
            let gy = &k.from_int(-2) * yq - a1 * xq - a3.clone();
            let vq = &k.from_int(2) * &gx - a1 * &gy;
            let uq = &gy * &gy;
            v = &v + &vq;
            w = &w + &(&uq + &(xq * &vq));
            terms.push([xq.clone(), yq.clone(), gx, gy, vq, uq]);
        }
        Ok(Velu { e, terms, v, w })
    }

    fn quotient(&self) -> Result<WeierstrassCurve> {
        let k = self.e.field();
        let [a1, a2, a3, a4, a6] = self.e.a().clone();
        let b2 = &self.e.b()[0];
        let a4n = a4 - &k.from_int(5) * &self.v;
        let a6n = a6 - b2 * &self.v - &k.from_int(7) * &self.w;
        WeierstrassCurve::new(k, [a1, a2, a3, a4n, a6n])
    }

    fn image(&self, pt: &Point) -> Result<Point> {
        let Point::Affine(x, y) = pt else {
            return Ok(Point::Infinity);
        };
        let [a1, _, a3, _, _] = self.e.a();
        let mut xn = x.clone();
        let mut yn = y.clone();
        for [xq, yq, gx, gy, vq, uq] in &self.terms {
            let d = x - xq;
            if d.is_zero() {
                return Ok(Point::Infinity);
            }
            let d1 = d.inv()?;
            let d2 = &d1 * &d1;
            let d3 = &d2 * &d1;
            xn = xn + vq * &d1 + uq * &d2;
            let t1 = uq * &(&k2(y) + &(a1 * x) + a3.clone()) * &d3;
            let t2 = vq * &(a1 * &d + y - yq.clone()) * &d2;
            let t3 = (a1 * uq - gx * gy) * &d2;
            yn = yn - t1 - t2 - t3;
        }
        Ok(Point::Affine(xn, yn))
    }
}

fn k2(y: &FieldElement) -> FieldElement {
    y + y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{make_field, Coefficient, LocalField};

    fn qp(p: u64) -> LocalField {
        make_field(p, 1, &[Coefficient::Int(-(p as i128)), Coefficient::Int(1)], 30).unwrap()
    }

    #[test]
    fn trivial_level_and_supersingular() {
        let k = qp(3);
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 0]).unwrap();
        let d = isogeny_kernel_data(&e, 0).unwrap();
        assert_eq!(d.subgroup.len(), 1);
        assert!(matches!(isogeny_kernel_data(&e, 1), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn level_two_is_unsupported() {
        let e = WeierstrassCurve::from_ints(&qp(5), [0, 0, 0, -1, 0]).unwrap();
        assert_eq!(isogeny_kernel_data(&e, 2).err(), Some(Error::VeluUnsupported(2)));
        assert!(matches!(isogeny_kernel_data(&e, 1), Err(Error::HypothesisViolated(_))));
    }
}
