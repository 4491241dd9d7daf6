//! Field elements pi^v * (unit + O(pi^rel)) with precision bookkeeping.

use super::residue::Fq;
use super::ring::RElem;
use super::LocalField;
use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// An element of the field. When `rel == 0` the element is only known to be
/// O(pi^val), i.e. zero to absolute precision `val`.
#[derive(Clone)]
pub struct FieldElement {
    field: LocalField,
    val: i64,
    rel: u32,
    unit: RElem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O(pi^{})", self.val)
        } else {
            write!(f, "pi^{} * {:?} + O(pi^{})", self.val, self.unit, self.val + self.rel as i64)
        }
    }
}

impl FieldElement {
    pub(crate) fn zero_to(field: &LocalField, abs: i64) -> FieldElement {
        FieldElement {
            field: field.clone(),
            val: abs,
            rel: 0,
            unit: field.0.ring.zero(),
        }
    }

    /// Element represented by a ring residue known modulo pi^abs.
    pub(crate) fn from_ring(field: &LocalField, a: &RElem, abs: u32) -> FieldElement {
        let ring = &field.0.ring;
        let abs = abs.min(ring.cap());
        let a = ring.trunc(a, abs);
        let w = ring.val(&a);
        if w >= abs {
            return Self::zero_to(field, abs as i64);
        }
        let rel = abs - w;
        let unit = ring.trunc(&ring.div_pi_pow(&a, w), rel);
        FieldElement {
            field: field.clone(),
            val: w as i64,
            rel,
            unit,
        }
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// pi-adic valuation; infinite when the element vanishes to the working
    /// precision.
    pub fn valuation(&self) -> Valuation {
        if self.rel == 0 || self.val >= self.field.prec() as i64 {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// Valuation of the leading digit, ignoring the working-precision cutoff.
    /// None when nothing is known beyond O(pi^abs).
    pub fn val_raw(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.val)
    }

    /// Absolute precision: the element is known modulo pi^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.rel as i64
    }

    /// Relative precision (digits known past the leading one, inclusive).
    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    /// Unit part u with x = pi^v u (meaningful modulo pi^rel).
    pub fn unit_part(&self) -> &RElem {
        &self.unit
    }

    /// True when the element is O(pi^a) with no known nonzero digit.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.rel == 0
    }

    /// Zero to the field's working precision.
    pub fn is_zero(&self) -> bool {
        self.valuation().is_infinite()
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Equality to the working precision of the host field.
    pub fn eq_prec(&self, other: &FieldElement) -> bool {
        (self - other).is_zero()
    }

    fn check_same(&self, other: &FieldElement) {
        debug_assert!(self.field == other.field, "elements of different fields");
    }

    /// Multiply by pi^k (exact, only shifts the valuation).
    pub fn shift(&self, k: i64) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            val: self.val + k,
            rel: self.rel,
            unit: self.unit.clone(),
        }
    }

    /// Drop precision to absolute precision `abs`.
    pub fn reduce_abs(&self, abs: i64) -> FieldElement {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.rel == 0 || abs <= self.val {
            return Self::zero_to(&self.field, abs);
        }
        let rel = (abs - self.val) as u32;
        FieldElement {
            field: self.field.clone(),
            val: self.val,
            rel,
            unit: self.field.0.ring.trunc(&self.unit, rel),
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let ring = &self.field.0.ring;
        Ok(FieldElement {
            field: self.field.clone(),
            val: -self.val,
            rel: self.rel,
            unit: ring.trunc(&ring.inv_unit(&self.unit), self.rel),
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<FieldElement> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        if k == 0 {
            return Ok(self.field.one());
        }
        if self.rel == 0 {
            return Ok(Self::zero_to(&self.field, self.val.saturating_mul(k)));
        }
        let ring = &self.field.0.ring;
        Ok(FieldElement {
            field: self.field.clone(),
            val: self.val * k,
            rel: self.rel,
            unit: ring.trunc(&ring.pow(&self.unit, k as u128), self.rel),
        })
    }

    /// Power by a large exponent (units and general elements alike).
    pub fn pow_u128(&self, k: u128) -> FieldElement {
        if k == 0 {
            return self.field.one();
        }
        if self.rel == 0 {
            return Self::zero_to(&self.field, self.val.saturating_mul(k.min(i64::MAX as u128) as i64));
        }
        let ring = &self.field.0.ring;
        FieldElement {
            field: self.field.clone(),
            val: self.val * k as i64,
            rel: self.rel,
            unit: ring.trunc(&ring.pow(&self.unit, k), self.rel),
        }
    }

    /// Residue class in F_q of an integral element.
    pub fn residue(&self) -> Result<Fq> {
        let rf = self.field.residue_field();
        if self.rel == 0 {
            if self.val >= 1 {
                return Ok(rf.zero());
            }
            return Err(Error::PrecisionExhausted("residue of an unknown element".into()));
        }
        match self.val {
            v if v > 0 => Ok(rf.zero()),
            0 => Ok(self.field.0.ring.residue(&self.unit)),
            v => Err(Error::HypothesisViolated(format!("residue of element of valuation {v}"))),
        }
    }

    /// Representative in the ring O_K / p^N (integral elements only). The
    /// digits beyond the absolute precision are zero.
    pub fn to_ring(&self) -> Result<RElem> {
        let ring = &self.field.0.ring;
        if self.rel == 0 {
            if self.val >= 0 {
                return Ok(ring.zero());
            }
            return Err(Error::PrecisionExhausted("negative absolute precision".into()));
        }
        if self.val < 0 {
            return Err(Error::HypothesisViolated(format!(
                "element of valuation {} is not integral",
                self.val
            )));
        }
        Ok(ring.mul(&self.unit, &self.field.pi_pow_ring(self.val as u32)))
    }

    /// Leading unit digit's residue (x / pi^v mod pi).
    pub fn leading_residue(&self) -> Option<Fq> {
        (self.rel > 0).then(|| self.field.0.ring.residue(&self.unit))
    }

    fn add_impl(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        let abs = self.abs_prec().min(other.abs_prec());
        if self.rel == 0 {
            return other.reduce_abs(abs);
        }
        if other.rel == 0 {
            return self.reduce_abs(abs);
        }
        let ring = &self.field.0.ring;
        let v = self.val.min(other.val);
        let span = abs - v;
        if span <= 0 {
            return Self::zero_to(&self.field, abs);
        }
        let a = ring.mul(&self.unit, &self.field.pi_pow_ring((self.val - v) as u32));
        let b = ring.mul(&other.unit, &self.field.pi_pow_ring((other.val - v) as u32));
        let s = ring.add(&a, &b);
        Self::from_ring(&self.field, &s, span as u32).shift(v)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.add_impl(&-rhs)
    }
}

impl<'a> Neg for &'a FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            val: self.val,
            rel: self.rel,
            unit: self.field.0.ring.neg(&self.unit),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same(rhs);
        match (self.rel, rhs.rel) {
            (0, 0) => FieldElement::zero_to(&self.field, self.val + rhs.val),
            (0, _) => FieldElement::zero_to(&self.field, self.val + rhs.val),
            (_, 0) => FieldElement::zero_to(&self.field, self.val + rhs.val),
            _ => {
                let ring = &self.field.0.ring;
                let rel = self.rel.min(rhs.rel);
                FieldElement {
                    field: self.field.clone(),
                    val: self.val + rhs.val,
                    rel,
                    unit: ring.trunc(&ring.mul(&self.unit, &rhs.unit), rel),
                }
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
