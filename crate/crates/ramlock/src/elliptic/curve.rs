//! Weierstrass models over a local field, their points and descriptors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfield::residue::Fq;
use crate::localfield::{ElementEncoding, Embedding, FieldDescriptor, FieldElement, LocalField};

/// Complex multiplication data: discriminant -4 (by Z[i]) or -3 (by
/// Z[omega]) and eta = a + b*i (resp. a + b*omega) of norm p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmData {
    pub disc: i64,
    pub eta: [i64; 2],
}

/// `{ field, a: [a1, a2, a3, a4, a6], cm? }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDescriptor {
    pub field: FieldDescriptor,
    pub a: Vec<ElementEncoding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmData>,
}

impl CurveDescriptor {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidDescriptor(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidDescriptor(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve descriptor serializes")
    }

    /// Build the curve over a freshly constructed host field.
    pub fn load(&self) -> Result<WeierstrassCurve> {
        let k = LocalField::from_descriptor(&self.field)?;
        self.load_over(&k)
    }

    /// Build the curve over an existing field with the same descriptor.
    pub fn load_over(&self, k: &LocalField) -> Result<WeierstrassCurve> {
        if k.descriptor() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if self.a.len() != 5 {
            return Err(Error::InvalidDescriptor(format!(
                "expected 5 coefficients [a1, a2, a3, a4, a6], got {}",
                self.a.len()
            )));
        }
        let a: Vec<FieldElement> = self.a.iter().map(|c| k.element(c)).collect::<Result<_>>()?;
        let mut e = WeierstrassCurve::new(k, [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()])?;
        e.cm = self.cm.clone();
        Ok(e)
    }
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integral coefficients.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    field: LocalField,
    a: [FieldElement; 5],
    b: [FieldElement; 4],
    disc: FieldElement,
    c4: FieldElement,
    c6: FieldElement,
    cm: Option<CmData>,
}

#[derive(Clone, Debug)]
pub enum Point {
    Infinity,
    Affine(FieldElement, FieldElement),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn eq_prec(&self, other: &Point) -> bool {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => true,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => x1.eq_prec(x2) && y1.eq_prec(y2),
            _ => false,
        }
    }
}

impl WeierstrassCurve {
    /// Validates integrality, non-singularity and the minimality guard
    /// v(disc) < 12.
    pub fn new(k: &LocalField, a: [FieldElement; 5]) -> Result<WeierstrassCurve> {
        for (c, name) in a.iter().zip(["a1", "a2", "a3", "a4", "a6"]) {
            if c.field() != k {
                return Err(Error::FieldMismatch);
            }
            if !c.is_integral() {
                return Err(Error::InvalidDescriptor(format!("{name} is not integral")));
            }
        }
        let [a1, a2, a3, a4, a6] = &a;
        let int = |n: i128| k.from_int(n);
        let b2 = a1 * a1 + &int(4) * a2;
        let b4 = &int(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + &int(4) * a6;
        let b8 = a1 * a1 * a6 + &int(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - &int(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + &int(36) * &b2 * &b4 - &int(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - &int(8) * &b4 * &b4 * &b4 - &int(27) * &b6 * &b6
            + &int(9) * &b2 * &b4 * &b6;
        match disc.valuation().finite() {
            None => return Err(Error::InvalidDescriptor("singular curve (discriminant 0)".into())),
            Some(v) if v >= 12 => return Err(Error::NonMinimalModel(v)),
            _ => {}
        }
        Ok(WeierstrassCurve {
            field: k.clone(),
            b: [b2, b4, b6, b8],
            disc,
            c4,
            c6,
            a,
            cm: None,
        })
    }

    /// Short form y^2 = x^3 + a4 x + a6 with integer coefficients.
    pub fn from_ints(k: &LocalField, a: [i128; 5]) -> Result<WeierstrassCurve> {
        WeierstrassCurve::new(k, a.map(|c| k.from_int(c)))
    }

    pub fn with_cm(mut self, cm: CmData) -> WeierstrassCurve {
        self.cm = Some(cm);
        self
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// [a1, a2, a3, a4, a6].
    pub fn a(&self) -> &[FieldElement; 5] {
        &self.a
    }

    /// [b2, b4, b6, b8].
    pub fn b(&self) -> &[FieldElement; 4] {
        &self.b
    }

    pub fn discriminant(&self) -> &FieldElement {
        &self.disc
    }

    pub fn c4(&self) -> &FieldElement {
        &self.c4
    }

    pub fn c6(&self) -> &FieldElement {
        &self.c6
    }

    pub fn cm(&self) -> Option<&CmData> {
        self.cm.as_ref()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn disc_valuation(&self) -> i64 {
        self.disc.valuation().finite().expect("checked nonsingular")
    }

    pub fn has_good_reduction(&self) -> bool {
        self.disc_valuation() == 0
    }

    /// Coefficients reduced to the residue field.
    pub fn reduced_coefficients(&self) -> Result<[Fq; 5]> {
        let r: Vec<Fq> = self.a.iter().map(|c| c.residue()).collect::<Result<_>>()?;
        Ok([r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone(), r[4].clone()])
    }

    pub fn descriptor(&self) -> Result<CurveDescriptor> {
        Ok(CurveDescriptor {
            field: self.field.descriptor().clone(),
            a: self.a.iter().map(|c| self.field.encode(c)).collect::<Result<_>>()?,
            cm: self.cm.clone(),
        })
    }

    /// The same equation over an extension field.
    pub fn base_change(&self, emb: &Embedding) -> Result<WeierstrassCurve> {
        let a: Vec<FieldElement> = self.a.iter().map(|c| emb.apply(c)).collect::<Result<_>>()?;
        let mut e = WeierstrassCurve::new(
            emb.target(),
            [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()],
        )?;
        e.cm = self.cm.clone();
        Ok(e)
    }

    /// 4x^3 + b2 x^2 + 2 b4 x + b6, the discriminant in y of the equation.
    pub fn y_discriminant(&self, x: &FieldElement) -> FieldElement {
        let [b2, b4, b6, _] = &self.b;
        let k = &self.field;
        let x2 = x * x;
        &k.from_int(4) * &x2 * x + b2 * &x2 + &k.from_int(2) * b4 * x + b6.clone()
    }

    /// Points with the given x-coordinate, if rational.
    pub fn lift_x(&self, x: &FieldElement) -> Result<Option<(FieldElement, FieldElement)>> {
        let d = self.y_discriminant(x);
        let Some(s) = sqrt(&d)? else {
            return Ok(None);
        };
        let [a1, _, a3, _, _] = &self.a;
        let h = a1 * x + a3.clone();
        let two = self.field.from_int(2);
        let y1 = (&s - &h).div(&two)?;
        let y2 = (-(&s) - h).div(&two)?;
        Ok(Some((y1, y2)))
    }

    pub fn is_on_curve(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let [a1, a2, a3, a4, a6] = &self.a;
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6.clone();
                lhs.eq_prec(&rhs)
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let [a1, _, a3, _, _] = &self.a;
                Point::Affine(x.clone(), -y - a1 * x - a3.clone())
            }
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Result<Point> {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return Ok(q.clone()),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let k = &self.field;
        let (lambda, nu) = if x1.eq_prec(x2) {
            let den = &k.from_int(2) * y1 + a1 * x1 + a3.clone();
            if den.is_zero() || (y1 + y2 + a1 * x2 + a3.clone()).is_zero() {
                return Ok(Point::Infinity);
            }
            let num = &k.from_int(3) * x1 * x1 + &k.from_int(2) * a2 * x1 + a4.clone() - a1 * y1;
            let nnum = -(x1 * x1 * x1) + a4 * x1 + &k.from_int(2) * a6 - a3 * y1;
            (num.div(&den)?, nnum.div(&den)?)
        } else {
            let dx = x2 - x1;
            ((y2 - y1).div(&dx)?, (y1 * x2 - y2 * x1).div(&dx)?)
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2.clone() - x1.clone() - x2.clone();
        let y3 = -(&(&lambda + a1) * &x3) - nu - a3.clone();
        Ok(Point::Affine(x3, y3))
    }

    /// [n]P for n >= 0.
    pub fn mul(&self, n: u64, pt: &Point) -> Result<Point> {
        let mut acc = Point::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Image in the reduced curve; `None` is the point at infinity.
    pub fn reduce_point(&self, pt: &Point) -> Result<Option<(Fq, Fq)>> {
        match pt {
            Point::Infinity => Ok(None),
            Point::Affine(x, y) => {
                if x.is_integral() {
                    Ok(Some((x.residue()?, y.residue()?)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Coefficients as plain text, e.g. "[0, 0, 0, -1, 0]".
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .a
            .iter()
            .map(|c| match self.field.encode(c) {
                Ok(enc) => serde_json::to_string(&enc).unwrap_or_default(),
                Err(_) => "?".into(),
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// A square root in k, if one exists (p odd). Zero is its own root.
pub fn sqrt(d: &FieldElement) -> Result<Option<FieldElement>> {
    let k = d.field();
    if d.is_zero() {
        return Ok(Some(k.zero()));
    }
    let v = d.val_raw().unwrap();
    if v.rem_euclid(2) != 0 {
        return Ok(None);
    }
    let u = d.shift(-v);
    let rf = k.residue_field();
    let r = u.residue()?;
    let half = (rf.order() - 1) / 2;
    if rf.pow(&r, half) != rf.one() {
        return Ok(None);
    }
    let roots = crate::localfield::roots::root_find(k, &[-u, k.zero(), k.one()])?;
    Ok(roots.first().map(|s| s.shift(v / 2)))
}
