//! Rational p-power torsion, decided inside k: roots of the p-division
//! polynomial, then [p]-preimages level by level, with a square test on the
//! y-discriminant.

use serde::{Deserialize, Serialize};

use super::curve::{Point, WeierstrassCurve};
use super::divpoly::{division_polys, multiplication_x, psub};
use super::formal::{formal_kernel, FormalGroupData};
use crate::error::{Error, Result};
use crate::localfield::linalg::FieldArith;
use crate::localfield::roots::root_find;
use crate::localfield::{Capped, FieldElement};

fn b_array(e: &WeierstrassCurve) -> [FieldElement; 4] {
    e.b().clone()
}

fn push_points(e: &WeierstrassCurve, xs: &[FieldElement], out: &mut Vec<Point>) -> Result<Vec<FieldElement>> {
    let mut kept = vec![];
    for x in xs {
        if out.iter().any(|pt| pt.x().is_some_and(|x0| x0.eq_prec(x))) {
            continue;
        }
        if let Some((y1, y2)) = e.lift_x(x)? {
            out.push(Point::Affine(x.clone(), y1));
            out.push(Point::Affine(x.clone(), y2));
            kept.push(x.clone());
        }
    }
    Ok(kept)
}

/// E(k)[p^n] as a list of points (the point at infinity first).
pub fn torsion_points(e: &WeierstrassCurve, n: u32) -> Result<Vec<Point>> {
    Ok(torsion_tower(e, n)?.pop().unwrap_or_else(|| vec![Point::Infinity]))
}

/// E(k)[p^j] for j = 0..=n, stopping early once a level adds nothing.
fn torsion_tower(e: &WeierstrassCurve, n: u32) -> Result<Vec<Vec<Point>>> {
    if !e.has_good_reduction() {
        return Err(Error::NotGoodReduction(e.label()));
    }
    let k = e.field();
    let p = e.p() as usize;
    let ar = FieldArith(k.clone());
    let b = b_array(e);
    let mut levels = vec![vec![Point::Infinity]];
    if n == 0 {
        return Ok(levels);
    }
    let fp = division_polys(&ar, &b, p).swap_remove(p);
    let mut pts = vec![Point::Infinity];
    let mut frontier = push_points(e, &root_find(k, &fp)?, &mut pts)?;
    levels.push(pts.clone());
    let (num, den) = multiplication_x(&ar, &b, p);
    for _ in 2..=n {
        let mut new_x = vec![];
        for a in &frontier {
            let scaled: Vec<FieldElement> = den.iter().map(|c| c * a).collect();
            new_x.extend(root_find(k, &psub(&ar, &num, &scaled))?);
        }
        frontier = push_points(e, &new_x, &mut pts)?;
        levels.push(pts.clone());
        if frontier.is_empty() {
            break;
        }
    }
    while levels.len() <= n as usize {
        levels.push(pts.clone());
    }
    Ok(levels)
}

/// Largest n <= nmax with E[p^n] contained in E(k); `cap_reached` when
/// n = nmax > 0.
pub fn torsion_level_n(e: &WeierstrassCurve, nmax: u32) -> Result<Capped<u32>> {
    let p = e.p() as usize;
    let levels = torsion_tower(e, nmax)?;
    let mut value = 0;
    for (n, pts) in levels.iter().enumerate().skip(1) {
        if pts.len() != p.pow(2 * n as u32) {
            break;
        }
        value = n as u32;
    }
    Ok(Capped { value, cap_reached: nmax > 0 && value == nmax })
}

/// The three counts in 0 -> E-hat[p^n](k) -> E(k)[p^n] -> E-bar[p^n].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedEtaleCounts {
    pub n: u32,
    pub formal: usize,
    pub image: usize,
    pub total: usize,
}

impl ConnectedEtaleCounts {
    pub fn multiplicative(&self) -> bool {
        self.formal * self.image == self.total
    }
}

/// Formal kernel counted on [p](t) roots, torsion counted on division
/// polynomial roots, image counted as distinct reductions.
pub fn connected_etale_counts(fg: &FormalGroupData, n: u32) -> Result<ConnectedEtaleCounts> {
    let e = &fg.curve;
    let formal = formal_kernel(fg, n)?.len();
    let pts = torsion_points(e, n)?;
    let mut images = vec![];
    for pt in &pts {
        let r = e.reduce_point(pt)?;
        if !images.contains(&r) {
            images.push(r);
        }
    }
    Ok(ConnectedEtaleCounts { n, formal, image: images.len(), total: pts.len() })
}
