//! Dense polynomials over a local field (coefficients low to high).

use super::{FieldElement, LocalField};
use num_rational::Ratio;

pub type Poly = Vec<FieldElement>;

pub fn from_ints(k: &LocalField, coeffs: &[i128]) -> Poly {
    coeffs.iter().map(|&c| k.from_int(c)).collect()
}

pub fn eval(poly: &[FieldElement], x: &FieldElement) -> FieldElement {
    let k = x.field();
    let mut acc = k.zero();
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn derivative(poly: &[FieldElement]) -> Poly {
    if poly.len() <= 1 {
        return vec![];
    }
    let k = poly[0].field().clone();
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &k.from_int(i as i128))
        .collect()
}

pub fn add(a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            _ => unreachable!(),
        })
        .collect()
}

pub fn sub(a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let nb: Poly = b.iter().map(|c| -c).collect();
    add(a, &nb)
}

pub fn mul(a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let k = a[0].field().clone();
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub fn scale(poly: &[FieldElement], c: &FieldElement) -> Poly {
    poly.iter().map(|x| x * c).collect()
}

/// Coefficients of P(r + X).
pub fn taylor_shift(poly: &[FieldElement], r: &FieldElement) -> Poly {
    let mut c: Poly = poly.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * r;
            c[j] = &c[j] + &t;
        }
    }
    c
}

/// Coefficients of P(pi^k X) (exact valuation shifts).
pub fn substitute_pi_power(poly: &[FieldElement], k: i64) -> Poly {
    poly.iter()
        .enumerate()
        .map(|(i, c)| c.shift(k * i as i64))
        .collect()
}

/// Remove high coefficients that are zero to working precision.
pub fn trim(poly: &mut Poly) {
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
}

/// Monic polynomial with the given roots.
pub fn from_roots(k: &LocalField, roots: &[FieldElement]) -> Poly {
    let mut acc = vec![k.one()];
    for r in roots {
        acc = mul(&acc, &[-r, k.one()]);
    }
    acc
}

/// One segment of a Newton polygon: indices [start, end] and the common
/// valuation of the roots it accounts for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub start: usize,
    pub end: usize,
    pub root_valuation: Ratio<i64>,
}

impl NewtonSegment {
    pub fn root_count(&self) -> usize {
        self.end - self.start
    }
}

/// Lower convex hull of the points (i, v_i); `None` entries are skipped.
pub fn newton_polygon(vals: &[Option<i64>]) -> Vec<NewtonSegment> {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v)))
        .collect();
    let mut hull: Vec<(i64, i64)> = vec![];
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep (x2,y2) only if it lies strictly below the chord
            let cross = (x2 - x1) * (pt.1 - y1) - (y2 - y1) * (pt.0 - x1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| NewtonSegment {
            start: w[0].0 as usize,
            end: w[1].0 as usize,
            root_valuation: Ratio::new(w[0].1 - w[1].1, w[1].0 - w[0].0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_polygon_shapes() {
        // x^2 - p over Q_p: single segment of slope 1/2
        let segs = newton_polygon(&[Some(1), None, Some(0)]);
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].root_valuation, Ratio::new(1, 2));
        // (x - p)(x - 1): valuations 1, 0, 0
        let segs = newton_polygon(&[Some(1), Some(0), Some(0)]);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].root_valuation, Ratio::from_integer(1));
        assert_eq!(segs[1].root_valuation, Ratio::from_integer(0));
    }
}
