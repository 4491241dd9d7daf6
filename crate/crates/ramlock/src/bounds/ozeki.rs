//! M(k_m) and N(k_m) along the cyclotomic tower k_m = k(mu_{p^m}).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Budget;
use crate::elliptic::{torsion_level_n, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::localfield::{cyclotomic_extend, invariant_m};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OzekiRow {
    pub m: u32,
    pub degree: usize,
    #[serde(rename = "M")]
    pub big_m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub gap: i64,
    /// True when M or N hit its search cap at this level.
    pub cap_reached: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OzekiReport {
    pub rows: Vec<OzekiRow>,
    /// Set when the tower stopped early, e.g. on DegreeCapExceeded.
    pub stopped: Option<String>,
}

pub fn ozeki_tower(e: &WeierstrassCurve, m_max: u32, budget: &Budget) -> Result<OzekiReport> {
    if !e.has_good_reduction() {
        return Err(Error::NotGoodReduction(e.label()));
    }
    let k = e.field();
    let levels: Vec<Result<OzekiRow>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let (km, emb) = cyclotomic_extend(k, m, budget.caps.degree_cap)?;
            let em = e.base_change(&emb)?;
            let big_m = invariant_m(&km, budget.caps.m_cap)?;
            let n = torsion_level_n(&em, budget.nmax)?;
            Ok(OzekiRow {
                m,
                degree: km.degree(),
                big_m: big_m.value,
                n: n.value,
                gap: big_m.value as i64 - n.value as i64,
                cap_reached: big_m.cap_reached || n.cap_reached,
            })
        })
        .collect();
    let mut rows = vec![];
    let mut stopped = None;
    for row in levels {
        match row {
            Ok(r) => rows.push(r),
            Err(err @ Error::DegreeCapExceeded { .. }) => {
                stopped = Some(err.to_string());
                break;
            }
            Err(err) => return Err(err),
        }
    }
    for r in &rows {
        if r.big_m < r.m && !r.cap_reached {
            return Err(Error::InconsistentInput(format!(
                "M(k_{}) = {} < {}: mu_(p^m) must lie in k_m",
                r.m, r.big_m, r.m
            )));
        }
    }
    // once N stops moving, M can only grow
    for w in rows.windows(2) {
        if w[0].n == w[1].n && w[1].gap < w[0].gap {
            return Err(Error::InconsistentInput(format!(
                "gap decreased from {} to {} at m = {} with N constant",
                w[0].gap, w[1].gap, w[1].m
            )));
        }
    }
    Ok(OzekiReport { rows, stopped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{FieldDescriptor, LocalField};

    #[test]
    fn empty_and_capped_towers() {
        let k = LocalField::from_descriptor(&FieldDescriptor::new(5, 1, &[-5, 1], 30)).unwrap();
        let e = WeierstrassCurve::from_ints(&k, [0, 0, 0, -1, 0]).unwrap();
        let budget = Budget::default();
        assert!(ozeki_tower(&e, 0, &budget).unwrap().rows.is_empty());
        let mut small = budget;
        small.caps.degree_cap = 2;
        let r = ozeki_tower(&e, 1, &small).unwrap();
        assert!(r.rows.is_empty());
        assert!(r.stopped.unwrap().starts_with("DegreeCapExceeded"));
    }
}
