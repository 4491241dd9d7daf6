//! Field invariants e_0, R, M and M^ur.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::tower::{primitive_root_of_unity, unramified_extend};
use super::LocalField;
use crate::error::Result;
use crate::unitsymbols::MulModPSpace;

pub const DEFAULT_DEGREE_CAP: usize = 16;
pub const DEFAULT_F_MAX: usize = 4;
pub const DEFAULT_M_CAP: u32 = 6;

/// Bounds on tower growth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub m_cap: u32,
    pub degree_cap: usize,
    pub f_max: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            m_cap: DEFAULT_M_CAP,
            degree_cap: DEFAULT_DEGREE_CAP,
            f_max: DEFAULT_F_MAX,
        }
    }
}

impl Caps {
    /// Defaults, with `RAMLOCK_DEGREE_CAP` overriding the degree cap.
    pub fn from_env() -> Caps {
        let mut caps = Caps::default();
        if let Some(d) = std::env::var("RAMLOCK_DEGREE_CAP").ok().and_then(|s| s.parse().ok()) {
            caps.degree_cap = d;
        }
        caps
    }
}

/// A value computed under a cap; `cap_reached` means the true value may be
/// larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capped<T> {
    pub value: T,
    pub cap_reached: bool,
}

impl<T> Capped<T> {
    pub fn exact(value: T) -> Self {
        Capped { value, cap_reached: false }
    }
}

/// e_k / (p - 1).
pub fn e0(k: &LocalField) -> Ratio<i64> {
    Ratio::new(k.e() as i64, k.p() as i64 - 1)
}

/// (min r with e <= (p-1) p^r, min r with e < (p-1) p^r).
pub fn invariant_r(k: &LocalField) -> (u32, u32) {
    let e = k.e() as u128;
    let p = k.p() as u128;
    let first = |strict: bool| {
        let mut r = 0u32;
        let mut bound = p - 1;
        while if strict { e >= bound } else { e > bound } {
            r += 1;
            bound *= p;
        }
        r
    };
    (first(false), first(true))
}

/// Largest m <= m_cap with mu_{p^m} in k.
pub fn invariant_m(k: &LocalField, m_cap: u32) -> Result<Capped<u32>> {
    let mut m = 0;
    while m < m_cap {
        if primitive_root_of_unity(k, m + 1)?.is_none() {
            return Ok(Capped::exact(m));
        }
        m += 1;
    }
    Ok(Capped { value: m, cap_reached: true })
}

/// Largest m with mu_{p^m} in the maximal unramified extension of k.
///
/// Starting from M(k), a cyclotomic step k'(zeta_{p^(M+1)}) / k' is
/// unramified exactly when the class of zeta_{p^M} lies in U-bar^{p e_0(k')};
/// such steps are taken until one is ramified.
pub fn invariant_mur(k: &LocalField, caps: &Caps) -> Result<Capped<u32>> {
    let m = invariant_m(k, caps.m_cap)?;
    if m.cap_reached {
        return Ok(m);
    }
    let mut cur = k.clone();
    let mut mcur = m.value;
    if mcur == 0 {
        // k(zeta_p)/k has degree dividing p - 1; look for zeta_p in the
        // unramified extensions of those degrees.
        let p = k.p() as usize;
        let mut found = None;
        let mut skipped = false;
        for d in (2..p).filter(|d| (p - 1) % d == 0) {
            if d > caps.f_max || k.degree() * d > caps.degree_cap {
                skipped = true;
                continue;
            }
            let (l, _) = unramified_extend(k, d, caps.degree_cap)?;
            let ml = invariant_m(&l, caps.m_cap)?;
            if ml.value > 0 {
                if ml.cap_reached {
                    return Ok(ml);
                }
                found = Some((l, ml.value));
                break;
            }
        }
        match found {
            Some((l, ml)) => {
                cur = l;
                mcur = ml;
            }
            None => return Ok(Capped { value: 0, cap_reached: skipped }),
        }
    }
    loop {
        if mcur >= caps.m_cap {
            return Ok(Capped { value: mcur, cap_reached: true });
        }
        let zeta = primitive_root_of_unity(&cur, mcur)?.expect("root of unity of order p^M");
        let space = MulModPSpace::new(&cur)?;
        let c = space.coords(&zeta)?;
        if !in_top_level(&space, &c) {
            return Ok(Capped::exact(mcur));
        }
        let p = cur.p() as usize;
        if cur.degree() * p > caps.degree_cap {
            return Ok(Capped { value: mcur, cap_reached: true });
        }
        let (l, _) = unramified_extend(&cur, p, caps.degree_cap)?;
        let ml = invariant_m(&l, caps.m_cap)?;
        debug_assert!(ml.value > mcur);
        if ml.cap_reached {
            return Ok(ml);
        }
        cur = l;
        mcur = ml.value;
    }
}

/// Whether a class lies in U-bar^{p e_0}: no uniformizer component and
/// nothing below the top level.
pub(crate) fn in_top_level(space: &MulModPSpace, c: &[u64]) -> bool {
    c[0] == 0
        && (1..space.dim()).all(|i| c[i] == 0 || Ratio::from_integer(space.kinds()[i].level() as i64) == space.pe0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldDescriptor;

    fn field(p: u64, eis: &[i128], prec: u32) -> LocalField {
        LocalField::from_descriptor(&FieldDescriptor::new(p, 1, eis, prec)).unwrap()
    }

    #[test]
    fn e0_and_r() {
        let q5 = field(5, &[-5, 1], 20);
        assert_eq!(e0(&q5), Ratio::new(1, 4));
        assert_eq!(invariant_r(&q5), (0, 0));
        let k = field(3, &[3, 3, 1], 20);
        assert_eq!(e0(&k), Ratio::from_integer(1));
        assert_eq!(invariant_r(&k), (0, 1));
    }

    #[test]
    fn m_and_mur() {
        let caps = Caps::default();
        let q5 = field(5, &[-5, 1], 20);
        assert_eq!(invariant_m(&q5, 4).unwrap(), Capped::exact(0));
        assert_eq!(invariant_mur(&q5, &caps).unwrap(), Capped::exact(0));
        let k = field(3, &[3, 3, 1], 30);
        assert_eq!(invariant_m(&k, 4).unwrap(), Capped::exact(1));
        assert_eq!(invariant_mur(&k, &caps).unwrap(), Capped::exact(1));
        assert!(invariant_m(&k, 1).unwrap().cap_reached);
    }
}
