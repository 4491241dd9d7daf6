//! The formal group of a Weierstrass model in the parameter z = -x/y.
//!
//! The group law is evaluated through the chord construction: with
//! w(z) = -1/y as a series, the line through (z1, w1), (z2, w2) has slope
//! lambda = sum A_n (z2^n - z1^n)/(z2 - z1), and the third intersection is
//! inverted. Substituting series in t for z1, z2 keeps everything
//! univariate, which is how [m](t) is computed.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::curve::{CmData, WeierstrassCurve};
use super::reduction::{reduction_type, ReductionKind};
use super::series::{Bi, Series, Series2, SeriesRing, Uni};
use crate::error::{Error, Result};
use crate::localfield::poly::newton_polygon;
use crate::localfield::roots::{root_find, root_find_filtered};
use crate::localfield::{FieldElement, LocalField};

/// Degree cap default p^2 + 6.
pub fn default_degree_cap(p: u64) -> usize {
    (p * p + 6) as usize
}

/// Coefficients of w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3.
pub fn w_series(e: &WeierstrassCurve, cap: usize) -> Series {
    let r = Uni::new(e.field(), cap);
    let [a1, a2, a3, a4, a6] = e.a();
    let z = r.var();
    let z2 = r.mul(&z, &z);
    let z3 = r.mul(&z2, &z);
    let mut w = r.zero();
    // each pass fixes at least one more coefficient
    for _ in 0..cap {
        let w2 = r.mul(&w, &w);
        let w3 = r.mul(&w2, &w);
        let terms = [
            z3.clone(),
            r.scale(&r.mul(&z, &w), a1),
            r.scale(&r.mul(&z2, &w), a2),
            r.scale(&w2, a3),
            r.scale(&r.mul(&z, &w2), a4),
            r.scale(&w3, a6),
        ];
        let next = terms.iter().fold(r.zero(), |acc, t| r.add(&acc, t));
        let done = next.iter().zip(&w).all(|(x, y)| x.eq_prec(y));
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Evaluates the group law F(z1, z2) and the inverse in any series ring.
struct Law<'a, R: SeriesRing> {
    ring: &'a R,
    e: &'a WeierstrassCurve,
    w: &'a Series,
}

impl<R: SeriesRing> Law<'_, R> {
    fn inverse(&self, z: &R::S) -> Result<R::S> {
        // i(z) = -z / (1 - a1 z - a3 w(z))
        let r = self.ring;
        let [a1, _, a3, _, _] = self.e.a();
        let wz = r.eval_poly(self.w, z);
        let den = r.sub(&r.sub(&r.one(), &r.scale(z, a1)), &r.scale(&wz, a3));
        Ok(r.sub(&r.zero(), &r.mul(z, &r.inv_unit(&den)?)))
    }

    fn add(&self, z1: &R::S, z2: &R::S) -> Result<R::S> {
        let r = self.ring;
        let [a1, a2, a3, a4, a6] = self.e.a();
        let k = r.field();
        // h_n = (z2^n - z1^n)/(z2 - z1); h_{n+1} = z2 h_n + z1^n
        let mut h = r.one();
        let mut z1_pow = z1.clone();
        let mut lambda = r.zero();
        for n in 1..self.w.len() {
            if n >= 3 && !self.w[n].is_zero() {
                lambda = r.add(&lambda, &r.scale(&h, &self.w[n]));
            }
            h = r.add(&r.mul(z2, &h), &z1_pow);
            z1_pow = r.mul(&z1_pow, z1);
        }
        let w1 = r.eval_poly(self.w, z1);
        let nu = r.sub(&w1, &r.mul(&lambda, z1));
        let l2 = r.mul(&lambda, &lambda);
        let l3 = r.mul(&l2, &lambda);
        let lnu = r.mul(&lambda, &nu);
        // the third root of the cubic in z cut out by w = lambda z + nu
        let num = [
            r.scale(&lambda, &-a1),
            r.scale(&l2, &-a3),
            r.scale(&nu, &-a2),
            r.scale(&lnu, &(&k.from_int(-2) * a4)),
            r.scale(&r.mul(&l2, &nu), &(&k.from_int(-3) * a6)),
        ]
        .iter()
        .fold(r.zero(), |acc, t| r.add(&acc, t));
        let den = [r.one(), r.scale(&lambda, a2), r.scale(&l2, a4), r.scale(&l3, a6)]
            .iter()
            .fold(r.zero(), |acc, t| r.add(&acc, t));
        let z3 = r.sub(&r.mul(&num, &r.inv_unit(&den)?), &r.add(z1, z2));
        self.inverse(&z3)
    }
}

/// Series data of the formal group to a degree cap.
#[derive(Clone)]
pub struct FormalGroupData {
    pub curve: WeierstrassCurve,
    pub degree_cap: usize,
    /// w(z) to degree cap + 1.
    pub w: Series,
    /// [p](t).
    pub mult_p: Series,
    /// Formal logarithm (coefficients may be non-integral).
    pub log: Series,
    /// Index of the lowest coefficient of [p](t) that is a unit: p or p^2.
    pub height_degree: usize,
}

pub fn formal_group(e: &WeierstrassCurve, degree_cap: usize) -> Result<FormalGroupData> {
    let p = e.p() as usize;
    if degree_cap < p * p + 1 {
        return Err(Error::CapTooSmall { cap: degree_cap, needed: p * p + 1 });
    }
    let k = e.field();
    let uni = Uni::new(k, degree_cap);
    // lambda at degree cap involves A_{cap+1}
    let w = w_series(e, degree_cap + 1);
    let law = Law { ring: &uni, e, w: &w };
    let t = uni.var();
    let mult_p = mult_series(&law, &t, p as i64)?;

    if !mult_p[1].eq_prec(&k.from_int(p as i128)) || !mult_p[0].is_zero() {
        return Err(Error::InconsistentInput("[p](t) is not p t + O(t^2)".into()));
    }
    let height_degree = mult_p
        .iter()
        .position(|c| c.valuation().finite() == Some(0))
        .ok_or_else(|| Error::CapReached(format!("no unit coefficient of [p](t) below {degree_cap}")))?;
    if e.has_good_reduction() {
        let expected = match reduction_type(e)?.kind {
            ReductionKind::GoodOrdinary => p,
            _ => p * p,
        };
        if height_degree != expected {
            return Err(Error::InconsistentInput(format!(
                "[p](t) mod p starts in degree {height_degree}, reduction type expects {expected}"
            )));
        }
    }

    let log = logarithm(e, &w_series(e, degree_cap + 3), degree_cap)?;
    let fg = FormalGroupData { curve: e.clone(), degree_cap, w, mult_p, log, height_degree };
    fg.check_identities()?;
    Ok(fg)
}

/// [m](z) by double-and-add on the law; negative m through the inverse.
fn mult_series<R: SeriesRing>(law: &Law<'_, R>, z: &R::S, m: i64) -> Result<R::S> {
    let r = law.ring;
    let mut acc = r.zero();
    let mut base = z.clone();
    let mut n = m.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = law.add(&acc, &base)?;
        }
        n >>= 1;
        if n > 0 {
            base = law.add(&base, &base)?;
        }
    }
    if m < 0 {
        acc = law.inverse(&acc)?;
    }
    Ok(acc)
}

/// log(z) = integral of the invariant differential
/// (2u + z u') / (2u - a1 z u - a3 z^3 u^2) dz with w = z^3 u; `w` must
/// reach degree cap + 3.
fn logarithm(e: &WeierstrassCurve, w: &Series, cap: usize) -> Result<Series> {
    let k = e.field();
    let r = Uni::new(k, cap);
    let [a1, _, a3, _, _] = e.a();
    let mut u = r.zero();
    for i in 0..=cap {
        u[i] = w[i + 3].clone();
    }
    let mut zu_prime = r.zero();
    for i in 1..=cap {
        zu_prime[i] = &u[i] * &k.from_int(i as i128);
    }
    let two = k.from_int(2);
    let num = r.add(&r.scale(&u, &two), &zu_prime);
    let z = r.var();
    let mut z3 = r.mul(&z, &r.mul(&z, &z));
    z3 = r.mul(&z3, &r.mul(&u, &u));
    let den = r.sub(
        &r.sub(&r.scale(&u, &two), &r.scale(&r.mul(&z, &u), a1)),
        &r.scale(&z3, a3),
    );
    let omega = r.mul(&num, &r.inv_unit(&den)?);
    let mut log = r.zero();
    for i in 0..cap {
        log[i + 1] = omega[i].div(&k.from_int(i as i128 + 1))?;
    }
    Ok(log)
}

impl FormalGroupData {
    pub fn field(&self) -> &LocalField {
        self.curve.field()
    }

    pub fn p(&self) -> u64 {
        self.curve.p()
    }

    fn uni(&self) -> Uni {
        Uni::new(self.field(), self.degree_cap)
    }

    /// 1 for ordinary, 2 for supersingular reduction.
    pub fn height(&self) -> u32 {
        if self.height_degree == self.p() as usize {
            1
        } else {
            2
        }
    }

    /// F(a(t), b(t)) for series without constant term.
    pub fn add(&self, a: &Series, b: &Series) -> Result<Series> {
        let uni = self.uni();
        Law { ring: &uni, e: &self.curve, w: &self.w }.add(a, b)
    }

    pub fn inverse(&self, a: &Series) -> Result<Series> {
        let uni = self.uni();
        Law { ring: &uni, e: &self.curve, w: &self.w }.inverse(a)
    }

    /// [m](t).
    pub fn mult(&self, m: i64) -> Result<Series> {
        let uni = self.uni();
        let law = Law { ring: &uni, e: &self.curve, w: &self.w };
        mult_series(&law, &uni.var(), m)
    }

    /// [p^n](t) as the n-fold composite of [p].
    pub fn mult_p_power(&self, n: u32) -> Series {
        let uni = self.uni();
        let mut acc = uni.var();
        for _ in 0..n {
            acc = uni.compose(&self.mult_p, &acc);
        }
        acc
    }

    /// The two-variable law to total degree `degree` (at most the cap).
    pub fn group_law(&self, degree: usize) -> Result<Series2> {
        let degree = degree.min(self.degree_cap);
        let bi = Bi::new(self.field(), degree);
        let law = Law { ring: &bi, e: &self.curve, w: &self.w };
        law.add(&bi.x(), &bi.y())
    }

    /// F(t, 0) = t, commutativity on F(t, t^2), and log linearising [p].
    fn check_identities(&self) -> Result<()> {
        let uni = self.uni();
        let t = uni.var();
        let t2 = uni.mul(&t, &t);
        let ident = self.add(&t, &uni.zero())?;
        if !series_eq(&ident, &t) {
            return Err(Error::InconsistentInput("F(t, 0) != t".into()));
        }
        if !series_eq(&self.add(&t, &t2)?, &self.add(&t2, &t)?) {
            return Err(Error::InconsistentInput("formal group law is not commutative".into()));
        }
        let lhs = uni.compose(&self.log, &self.mult_p);
        let rhs = uni.scale(&self.log, &self.field().from_int(self.p() as i128));
        if !series_eq(&lhs, &rhs) {
            return Err(Error::InconsistentInput("log([p] t) != p log t".into()));
        }
        Ok(())
    }
}

pub fn series_eq(a: &Series, b: &Series) -> bool {
    a.iter().zip(b).all(|(x, y)| x.eq_prec(y))
}

/// Valuations of the nonzero roots of a series without constant term,
/// read off the Newton polygon up to its first unit coefficient; each slope
/// is listed with its multiplicity.
pub fn kernel_slopes(s: &Series) -> Vec<(Ratio<i64>, usize)> {
    let end = s
        .iter()
        .position(|c| c.valuation().finite() == Some(0))
        .unwrap_or(s.len() - 1);
    let vals: Vec<Option<i64>> = s[1..=end].iter().map(|c| c.valuation().finite()).collect();
    newton_polygon(&vals)
        .into_iter()
        .map(|seg| (seg.root_valuation, seg.root_count()))
        .collect()
}

/// Roots t in m_k of s(t) = target, with s truncated at the cap.
fn solve_in_maximal_ideal(k: &LocalField, s: &Series, target: &FieldElement) -> Result<Vec<FieldElement>> {
    let mut poly = s.clone();
    poly[0] = &poly[0] - target;
    // coefficients beyond the first unit one do not affect roots in m_k
    // beyond the working precision once truncated; keep the full cap
    root_find_filtered(k, &poly, Some(1))
}

/// All of E-hat[p^n](k): roots of [p^n](t) in m_k, found by iterating
/// [p](t) = r over the previous level.
pub fn formal_kernel(fg: &FormalGroupData, n: u32) -> Result<Vec<FieldElement>> {
    let k = fg.field();
    let mut all = vec![k.zero()];
    let mut frontier = vec![k.zero()];
    for _ in 0..n {
        let mut next = vec![];
        for r in &frontier {
            for t in solve_in_maximal_ideal(k, &fg.mult_p, r)? {
                if !all.iter().any(|a| a.eq_prec(&t)) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NhatReport {
    pub value: u32,
    pub cap_reached: bool,
    pub height: u32,
    /// Valuations of the nonzero roots of [p](t), with multiplicity.
    pub slopes: Vec<(Ratio<i64>, usize)>,
    /// Terms dropped by truncation have valuation at least this much at any
    /// root in m_k.
    pub tail_valuation_bound: usize,
}

/// Largest n <= nmax with E-hat[p^n] contained in E-hat(m_k).
pub fn nhat(fg: &FormalGroupData, nmax: u32) -> Result<NhatReport> {
    let p = fg.p() as usize;
    let h = fg.height();
    let mut value = 0;
    let mut cap_reached = true;
    for n in 1..=nmax {
        let roots = formal_kernel(fg, n)?;
        if roots.len() != p.pow(h * n) {
            cap_reached = false;
            break;
        }
        value = n;
    }
    if nmax == 0 {
        cap_reached = false;
    }
    Ok(NhatReport {
        value,
        cap_reached: cap_reached && nmax > 0,
        height: h,
        slopes: kernel_slopes(&fg.mult_p),
        tail_valuation_bound: fg.degree_cap + 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T0Report {
    /// max v_k(y) over nonzero y in E-hat[p]; `None` when E-hat[p] is not
    /// rational over k.
    pub t0: Option<i64>,
    /// False means the slopes below come from the splitting field, reported
    /// as an extension of the rational case.
    pub rational: bool,
    pub slopes: Vec<(Ratio<i64>, usize)>,
    /// (p t0, p (e0 - t0)).
    pub levels: Option<(Ratio<i64>, Ratio<i64>)>,
}

pub fn t0(fg: &FormalGroupData) -> Result<T0Report> {
    if fg.height() != 2 {
        return Err(Error::NotSupersingular);
    }
    let k = fg.field();
    let p = fg.p() as i64;
    let slopes = kernel_slopes(&fg.mult_p);
    let roots = formal_kernel(fg, 1)?;
    if roots.len() != (p * p) as usize {
        return Ok(T0Report { t0: None, rational: false, slopes, levels: None });
    }
    let t0 = roots
        .iter()
        .filter_map(|r| r.valuation().finite())
        .max()
        .expect("nonzero roots exist");
    let e0 = crate::localfield::e0(k);
    let pe0 = e0 * p;
    if Ratio::from_integer(t0) >= pe0 {
        return Err(Error::InconsistentInput(format!("t0 = {t0} is not below p e0 = {pe0}")));
    }
    let levels = (Ratio::from_integer(p * t0), (e0 - t0) * p);
    Ok(T0Report { t0: Some(t0), rational: true, slopes, levels: Some(levels) })
}

/// Checks ker(eta^n) = E-hat[p^n] for a CM curve y^2 = x^3 + A x (disc -4,
/// [i] z = i z) or y^2 = x^3 + B (disc -3, [omega] z = omega z), where the
/// root of unity in k is chosen so that eta lies in the maximal ideal.
pub fn cm_kernel_check(fg: &FormalGroupData, cm: &CmData, n: u32) -> Result<bool> {
    let e = &fg.curve;
    let k = fg.field();
    let p = fg.p() as i64;
    let [a1, a2, a3, a4, a6] = e.a();
    let short = a1.is_zero() && a2.is_zero() && a3.is_zero();
    let (min_poly, norm) = match cm.disc {
        -4 if short && a6.is_zero() => {
            if p % 4 == 3 {
                return Err(Error::NotSplit(format!("{p} is inert in Z[i]")));
            }
            ([1i128, 0, 1], cm.eta[0].pow(2) + cm.eta[1].pow(2))
        }
        -3 if short && a4.is_zero() => {
            if p % 3 != 1 {
                return Err(Error::NotSplit(format!("{p} does not split in Z[omega]")));
            }
            ([1, 1, 1], cm.eta[0].pow(2) - cm.eta[0] * cm.eta[1] + cm.eta[1].pow(2))
        }
        -4 | -3 => {
            return Err(Error::NotCM(format!(
                "model {} is not of the shape with the automorphism of disc {}",
                e.label(),
                cm.disc
            )))
        }
        d => return Err(Error::NotCM(format!("unsupported discriminant {d}"))),
    };
    if norm != p {
        return Err(Error::HypothesisViolated(format!("eta has norm {norm}, not {p}")));
    }
    if n == 0 {
        return Ok(true);
    }
    let poly: Vec<FieldElement> = min_poly.iter().map(|&c| k.from_int(c)).collect();
    let units = root_find(k, &poly)?;
    let (a, b) = (k.from_int(cm.eta[0] as i128), k.from_int(cm.eta[1] as i128));
    let zeta = units
        .into_iter()
        .find(|u| (&a + &(&b * u)).valuation().finite().is_none_or(|v| v > 0))
        .ok_or_else(|| Error::HypothesisViolated("eta is a unit for both embeddings".into()))?;

    let uni = fg.uni();
    let mult_a = fg.mult(cm.eta[0])?;
    let mult_b = fg.mult(cm.eta[1])?;
    let eta = fg.add(&mult_a, &uni.rescale(&mult_b, &zeta))?;
    let mut eta_n = uni.var();
    for _ in 0..n {
        eta_n = uni.compose(&eta, &eta_n);
    }
    let p_n = fg.mult_p_power(n);
    let unit_at = |s: &Series| s.iter().position(|c| c.valuation().finite() == Some(0));
    let (Some(de), Some(dp)) = (unit_at(&eta_n), unit_at(&p_n)) else {
        return Err(Error::CapReached(format!(
            "no unit coefficient below degree {} at level {n}",
            fg.degree_cap
        )));
    };
    if de != dp || kernel_slopes(&eta_n) != kernel_slopes(&p_n) {
        return Ok(false);
    }
    // rational kernels must coincide as sets
    let re = root_find_filtered(k, &eta_n, Some(1))?;
    let rp = root_find_filtered(k, &p_n, Some(1))?;
    Ok(re.len() == rp.len() && re.iter().all(|x| rp.iter().any(|y| x.eq_prec(y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{make_field, Coefficient};

    fn qp(p: u64, prec: u32) -> LocalField {
        make_field(p, 1, &[Coefficient::Int(-(p as i128)), Coefficient::Int(1)], prec).unwrap()
    }

    #[test]
    fn w_starts_with_z_cubed() {
        let k = qp(5, 20);
        let e = WeierstrassCurve::from_ints(&k, [1, 2, 3, 4, 6]).unwrap();
        let w = w_series(&e, 8);
        assert!(w[3].eq_prec(&k.one()));
        // A4 = a1, A5 = a1^2 + a2
        assert!(w[4].eq_prec(&k.from_int(1)));
        assert!(w[5].eq_prec(&k.from_int(3)));
        assert!(w[0].is_zero() && w[1].is_zero() && w[2].is_zero());
    }

    #[test]
    fn corpus_heights() {
        let e = WeierstrassCurve::from_ints(&qp(5, 20), [0, 0, 0, -1, 0]).unwrap();
        let fg = formal_group(&e, default_degree_cap(5)).unwrap();
        assert_eq!(fg.height_degree, 5);
        let e = WeierstrassCurve::from_ints(&qp(3, 20), [0, 0, 0, 1, 0]).unwrap();
        let fg = formal_group(&e, default_degree_cap(3)).unwrap();
        assert_eq!(fg.height_degree, 9);
        assert_eq!(
            formal_group(&e, 9).err(),
            Some(Error::CapTooSmall { cap: 9, needed: 10 })
        );
    }

    #[test]
    fn two_variable_law_identities() {
        let k = qp(3, 20);
        let e = WeierstrassCurve::from_ints(&k, [1, 0, 1, 2, 1]).unwrap();
        let fg = formal_group(&e, 10).unwrap();
        let f = fg.group_law(7).unwrap();
        // F(X, Y) = X + Y - a1 X Y - a2 (X^2 Y + X Y^2) + ...
        assert!(f[1][0].eq_prec(&k.one()) && f[0][1].eq_prec(&k.one()));
        assert!(f[1][1].eq_prec(&k.from_int(-1)));
        for i in 0..=7 {
            for j in 0..=7 - i {
                assert!(f[i][j].eq_prec(&f[j][i]), "asymmetric at {i},{j}");
                if j == 0 && i != 1 {
                    assert!(f[i][0].is_zero());
                }
            }
        }
    }

    #[test]
    fn supersingular_slopes_over_q3() {
        let k = qp(3, 20);
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, 1, 0]).unwrap();
        let fg = formal_group(&e, default_degree_cap(3)).unwrap();
        assert_eq!(nhat(&fg, 3).unwrap().value, 0);
        let r = t0(&fg).unwrap();
        assert!(!r.rational);
        assert_eq!(r.slopes, vec![(Ratio::new(1, 8), 8)]);
    }

    #[test]
    fn cm_check_over_q5() {
        let k = qp(5, 20);
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]).unwrap();
        let fg = formal_group(&e, default_degree_cap(5)).unwrap();
        let cm = CmData { disc: -4, eta: [2, 1] };
        assert!(cm_kernel_check(&fg, &cm, 0).unwrap());
        assert!(cm_kernel_check(&fg, &cm, 1).unwrap());
        assert!(cm_kernel_check(&fg, &CmData { disc: -4, eta: [2, -1] }, 1).unwrap());
        let ord = WeierstrassCurve::from_ints(&qp(3, 20), [0, 0, 0, 1, 0]).unwrap();
        let fg3 = formal_group(&ord, 15).unwrap();
        assert!(matches!(cm_kernel_check(&fg3, &cm, 1), Err(Error::NotSplit(_))));
        assert!(matches!(t0(&fg), Err(Error::NotSupersingular)));
    }
}
