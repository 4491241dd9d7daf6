//! Report types and their JSON form.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::elliptic::{CmData, ReductionData, ReductionKind, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::galmod::AbGroup;
use crate::localfield::{ElementEncoding, FieldDescriptor, LocalField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub descriptor: FieldDescriptor,
    pub p: u64,
    pub e: usize,
    pub f: usize,
}

impl FieldSummary {
    pub fn of(k: &LocalField) -> FieldSummary {
        FieldSummary { descriptor: k.descriptor().clone(), p: k.p(), e: k.e(), f: k.f() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub a: Vec<ElementEncoding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmData>,
    pub reduction: ReductionKind,
    pub point_count: Option<u64>,
    pub trace: Option<i64>,
    pub g: u32,
}

impl CurveSummary {
    pub fn of(e: &WeierstrassCurve, red: &ReductionData) -> Result<CurveSummary> {
        let d = e.descriptor()?;
        Ok(CurveSummary {
            a: d.a,
            cm: d.cm,
            reduction: red.kind,
            point_count: red.point_count.map(|c| c as u64),
            trace: red.trace.map(|t| t as i64),
            g: 1,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RPair {
    pub leq: u32,
    pub strict: u32,
}

/// The invariants block. Entries a computation did not reach are null.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBlock {
    #[serde(rename = "M")]
    pub m: Option<u32>,
    #[serde(rename = "Mur")]
    pub mur: Option<u32>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    #[serde(rename = "Nhat")]
    pub nhat: Option<u32>,
    pub e0: Option<String>,
    pub t0: Option<i64>,
    #[serde(rename = "R")]
    pub r: Option<RPair>,
    pub g: u32,
}

pub fn ratio_string(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsBlock {
    pub lower: AbGroup,
    pub upper: AbGroup,
    pub exact: Option<AbGroup>,
    pub case: Option<String>,
}

/// Outcome of the search for symbol generators along k(mu_{p^m}),
/// M <= m <= M + R.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorClimb {
    /// Tower level where generators were found.
    pub m: Option<u32>,
    /// (m, field degree, outcome) per attempted level; the degree is the
    /// one requested when construction failed, 0 if unknown.
    pub attempts: Vec<(u32, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub field: Option<FieldSummary>,
    pub curve: Option<CurveSummary>,
    pub invariants: InvariantBlock,
    pub bounds: BoundsBlock,
    pub caveats: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GeneratorClimb>,
    #[serde(default)]
    pub seed: u64,
}

impl BoundReport {
    /// lower | exact | upper in elementary-divisor order.
    pub fn check_order(&self) -> Result<()> {
        let b = &self.bounds;
        let ok = match &b.exact {
            Some(x) => b.lower.divides(x) && x.divides(&b.upper),
            None => b.lower.divides(&b.upper),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InconsistentInput(format!(
                "bounds out of order: lower {}, exact {:?}, upper {}",
                b.lower,
                b.exact.as_ref().map(|x| x.to_string()),
                b.upper
            )))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<BoundReport> {
        serde_json::from_str(s).map_err(|e| Error::InvalidDescriptor(e.to_string()))
    }
}
