//! A fixed set of (field, curve) pairs used by the self-test and the
//! acceptance suite.

use crate::elliptic::{CmData, WeierstrassCurve};
use crate::error::Result;
use crate::localfield::{cyclotomic_extend, FieldDescriptor, LocalField};

/// Degree cap large enough for Q_5(zeta_25).
pub const CORPUS_DEGREE_CAP: usize = 20;

pub struct Instance {
    pub name: &'static str,
    pub curve: WeierstrassCurve,
}

pub fn q(p: u64, prec: u32) -> Result<LocalField> {
    LocalField::from_descriptor(&FieldDescriptor::new(p, 1, &[-(p as i128), 1], prec))
}

/// Q_3(zeta_3) as Q_3[pi]/(pi^2 + 3 pi + 3), pi = zeta_3 - 1.
pub fn q3_zeta3(prec: u32) -> Result<LocalField> {
    LocalField::from_descriptor(&FieldDescriptor::new(3, 1, &[3, 3, 1], prec))
}

/// A degree-16 extension of Q_3 over which y^2 = x^3 + x has all its
/// 3-torsion rational.
pub fn q3_torsion_field(prec: u32) -> Result<LocalField> {
    LocalField::from_descriptor(&FieldDescriptor::new(3, 2, &[-48, 0, 0, 0, 24, 0, 0, 0, 1], prec))
}

pub const CM_MINUS_FOUR: CmData = CmData { disc: -4, eta: [2, 1] };

/// y^2 = x^3 - x over Q_5(zeta_{5^m}); m = 0 is Q_5 itself.
pub fn cm_curve(m: u32) -> Result<WeierstrassCurve> {
    let e = WeierstrassCurve::from_ints(&q(5, 40)?, [0, 0, 0, -1, 0])?.with_cm(CM_MINUS_FOUR);
    if m == 0 {
        return Ok(e);
    }
    let (_, emb) = cyclotomic_extend(e.field(), m, CORPUS_DEGREE_CAP)?;
    e.base_change(&emb)
}

pub fn instances() -> Result<Vec<Instance>> {
    let ordinary = [0, 4, 0, 2, 0];
    Ok(vec![
        Instance { name: "x^3-x / Q_5", curve: cm_curve(0)? },
        Instance { name: "x^3-x / Q_5(zeta_5)", curve: cm_curve(1)? },
        Instance { name: "x^3-x / Q_5(zeta_25)", curve: cm_curve(2)? },
        Instance {
            name: "x^3+x / Q_3",
            curve: WeierstrassCurve::from_ints(&q(3, 40)?, [0, 0, 0, 1, 0])?,
        },
        Instance {
            name: "x^3+x / Q_3(E[3])",
            curve: WeierstrassCurve::from_ints(&q3_torsion_field(40)?, [0, 0, 0, 1, 0])?,
        },
        Instance {
            name: "x^3+4x^2+2x / Q_3",
            curve: WeierstrassCurve::from_ints(&q(3, 40)?, ordinary)?,
        },
        Instance {
            name: "x^3+4x^2+2x / Q_3(zeta_3)",
            curve: WeierstrassCurve::from_ints(&q3_zeta3(40)?, ordinary)?,
        },
    ])
}
