//! Finite extensions of Q_p presented as an unramified ring followed by an
//! Eisenstein extension, with fixed-precision arithmetic.

pub mod descriptor;
mod element;
pub mod linalg;
pub mod invariants;
pub mod poly;
pub mod residue;
pub mod ring;
pub mod roots;
pub mod tower;
pub mod zmod;

use std::fmt;
use std::sync::Arc;

pub use descriptor::{Coefficient, ElementEncoding, FieldDescriptor};
pub use element::{FieldElement, Valuation};
pub use invariants::{e0, invariant_m, invariant_mur, invariant_r, Capped, Caps};
pub use roots::root_find;
pub use tower::{cyclotomic_extend, kummer_extend, primitive_root_of_unity, unramified_extend, Embedding, KummerStep};

use crate::error::{Error, Result};
use residue::{canonical_irreducible, is_irreducible, FpPoly, ResidueField};
use ring::{RElem, Ring};
use zmod::Modulus;

/// Default working precision in pi-adic digits.
pub const DEFAULT_PREC: u32 = 40;

/// One step in the construction history of a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Base,
    Unramified { degree: usize },
    Cyclotomic { m: u32 },
    Kummer { step_ramification: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Base => write!(f, "base"),
            Provenance::Unramified { degree } => write!(f, "unramified degree {degree}"),
            Provenance::Cyclotomic { m } => write!(f, "cyclotomic m={m}"),
            Provenance::Kummer { step_ramification } => {
                write!(f, "kummer (ramification {step_ramification})")
            }
        }
    }
}

pub(crate) struct FieldInner {
    pub(crate) p: u64,
    pub(crate) f: usize,
    pub(crate) e: usize,
    pub(crate) prec: u32,
    pub(crate) ring: Ring,
    pub(crate) unram: FpPoly,
    /// Eisenstein coefficients over W as integers (length f each), e+1 entries.
    pub(crate) eis: Vec<Vec<i128>>,
    pub(crate) descriptor: FieldDescriptor,
    pub(crate) provenance: Vec<Provenance>,
    /// pi^k for k < cap.
    pub(crate) pi_pows: Vec<RElem>,
}

/// A finite extension of Q_p at a fixed working precision. Cloning is cheap;
/// two handles denote the same field iff they come from the same
/// construction.
#[derive(Clone)]
pub struct LocalField(pub(crate) Arc<FieldInner>);

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField({})", self.0.descriptor.to_json())
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Build and validate a field from p, residue degree, Eisenstein polynomial
/// coefficients (low to high, over the unramified subring) and precision.
pub fn make_field(p: u64, f: usize, eis_poly: &[Coefficient], prec: u32) -> Result<LocalField> {
    let desc = FieldDescriptor {
        p,
        f,
        eisenstein: eis_poly.to_vec(),
        prec,
    };
    LocalField::from_descriptor(&desc)
}

impl LocalField {
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<LocalField> {
        if desc.p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(desc.p) {
            return Err(Error::InvalidDescriptor(format!("{} is not prime", desc.p)));
        }
        if desc.f == 0 {
            return Err(Error::InvalidDescriptor("residue degree must be >= 1".into()));
        }
        if desc.prec == 0 {
            return Err(Error::InvalidDescriptor("precision must be >= 1".into()));
        }
        let unram = canonical_irreducible(desc.p, desc.f);
        let eis = desc
            .eisenstein
            .iter()
            .map(|c| {
                c.to_vec(desc.f).ok_or_else(|| {
                    Error::InvalidDescriptor(format!("coefficient {c:?} has degree >= f"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(desc.p, unram, eis, desc.prec, vec![Provenance::Base], Some(desc.clone()))
    }

    /// Like [`make_field`] but with an explicit unramified polynomial, which
    /// is checked for irreducibility.
    pub fn with_unram_poly(
        p: u64,
        unram: &[u64],
        eis_poly: &[Coefficient],
        prec: u32,
    ) -> Result<LocalField> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if unram.last() != Some(&1) || !is_irreducible(&unram.to_vec(), p) {
            return Err(Error::ReducibleUnramPoly(format!("{unram:?} mod {p}")));
        }
        let f = unram.len() - 1;
        let eis = eis_poly
            .iter()
            .map(|c| c.to_vec(f).ok_or_else(|| Error::InvalidDescriptor(format!("{c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let desc = FieldDescriptor {
            p,
            f,
            eisenstein: eis_poly.to_vec(),
            prec,
        };
        Self::build(p, unram.to_vec(), eis, prec, vec![Provenance::Base], Some(desc))
    }

    pub(crate) fn build(
        p: u64,
        unram: FpPoly,
        eis: Vec<Vec<i128>>,
        prec: u32,
        provenance: Vec<Provenance>,
        descriptor: Option<FieldDescriptor>,
    ) -> Result<LocalField> {
        let f = unram.len() - 1;
        if eis.len() < 2 {
            return Err(Error::NonEisenstein("degree must be at least 1".into()));
        }
        let e = eis.len() - 1;
        let pi = p as i128;
        let lead = &eis[e];
        if lead[0] != 1 || lead[1..].iter().any(|&c| c != 0) {
            return Err(Error::NonEisenstein("leading coefficient must be 1".into()));
        }
        for (i, c) in eis[..e].iter().enumerate() {
            if c.iter().any(|&x| x % pi != 0) {
                return Err(Error::NonEisenstein(format!(
                    "coefficient of x^{i} is not divisible by {p}"
                )));
            }
        }
        if eis[0].iter().all(|&x| (x / pi) % pi == 0) {
            return Err(Error::NonEisenstein(format!(
                "constant term does not have {p}-adic valuation exactly 1"
            )));
        }
        let digits = prec.div_ceil(e as u32);
        let md = Modulus::new(p, digits)?;
        let ring = Ring::new(md, &unram, &eis);
        let cap = ring.cap();
        let mut pi_pows = Vec::with_capacity(cap as usize);
        let pi_elem = ring.pi_pow(1);
        let mut cur = ring.one();
        for _ in 0..cap {
            pi_pows.push(cur.clone());
            cur = ring.mul(&cur, &pi_elem);
        }
        let descriptor = descriptor.unwrap_or_else(|| FieldDescriptor {
            p,
            f,
            eisenstein: eis.iter().map(|c| Coefficient::from_vec(c)).collect(),
            prec,
        });
        Ok(LocalField(Arc::new(FieldInner {
            p,
            f,
            e,
            prec,
            ring,
            unram,
            eis,
            descriptor,
            provenance,
            pi_pows,
        })))
    }

    /// Same field data at another precision (a new field, not identical to
    /// `self`).
    pub fn with_prec(&self, prec: u32) -> Result<LocalField> {
        Self::build(
            self.0.p,
            self.0.unram.clone(),
            self.0.eis.clone(),
            prec,
            self.0.provenance.clone(),
            Some(FieldDescriptor {
                prec,
                ..self.0.descriptor.clone()
            }),
        )
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Residue degree f.
    pub fn f(&self) -> usize {
        self.0.f
    }

    /// Absolute ramification index e_k.
    pub fn e(&self) -> usize {
        self.0.e
    }

    /// Absolute degree [k : Q_p].
    pub fn degree(&self) -> usize {
        self.0.e * self.0.f
    }

    /// Working precision in pi-adic digits.
    pub fn prec(&self) -> u32 {
        self.0.prec
    }

    /// Internal absolute precision of the ring in pi-adic digits.
    pub fn cap(&self) -> u32 {
        self.0.ring.cap()
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn residue_field(&self) -> &ResidueField {
        self.0.ring.residue_field()
    }

    /// Residue field order q = p^f.
    pub fn q(&self) -> u128 {
        (self.0.p as u128).pow(self.0.f as u32)
    }

    pub fn unram_poly(&self) -> &[u64] {
        &self.0.unram
    }

    pub fn eis_poly(&self) -> &[Vec<i128>] {
        &self.0.eis
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.descriptor
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.0.provenance
    }

    pub(crate) fn pi_pow_ring(&self, k: u32) -> RElem {
        if k >= self.cap() {
            self.0.ring.zero()
        } else {
            self.0.pi_pows[k as usize].clone()
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero_to(self, self.cap() as i64)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i128) -> FieldElement {
        FieldElement::from_ring(self, &self.0.ring.from_int(a), self.cap())
    }

    /// The uniformizer pi.
    pub fn pi(&self) -> FieldElement {
        FieldElement::from_ring(self, &self.pi_pow_ring(1), self.cap())
    }

    /// The generator t of the unramified subring (a lift of the residue
    /// field generator).
    pub fn unram_gen(&self) -> FieldElement {
        let mut w = vec![0u128; self.0.f];
        if self.0.f > 1 {
            w[1] = 1;
        } else {
            w[0] = 0;
        }
        FieldElement::from_ring(self, &self.0.ring.from_w(&w), self.cap())
    }

    /// Teichmuller-free lift of a residue (coordinates in [0, p)).
    pub fn lift_residue(&self, x: &residue::Fq) -> FieldElement {
        FieldElement::from_ring(self, &self.0.ring.lift(x), self.cap())
    }

    /// Element from an encoding (sum of W-coefficients times powers of pi).
    pub fn element(&self, enc: &ElementEncoding) -> Result<FieldElement> {
        match enc {
            ElementEncoding::Int(a) => Ok(self.from_int(*a)),
            ElementEncoding::PiAdic(coeffs) => {
                let ring = &self.0.ring;
                let mut acc = ring.zero();
                for (i, c) in coeffs.iter().enumerate() {
                    let v = c
                        .to_vec(self.0.f)
                        .ok_or_else(|| Error::InvalidDescriptor(format!("{c:?}")))?;
                    let w: Vec<u128> = v.iter().map(|&x| ring.md.from_i128(x)).collect();
                    let term = ring.mul(&ring.from_w(&w), &self.pi_pow_ring(i as u32));
                    acc = ring.add(&acc, &term);
                }
                Ok(FieldElement::from_ring(self, &acc, self.cap()))
            }
        }
    }

    /// Uniformly random element of O_k modulo the working precision.
    pub fn random_integral<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let ring = &self.0.ring;
        let m = ring.md.value();
        let a: RElem = (0..ring.len()).map(|_| rng.gen_range(0..m)).collect();
        FieldElement::from_ring(self, &a, self.cap())
    }

    /// Encode an integral element as W-coefficients of powers of pi, with
    /// balanced integer representatives.
    pub fn encode(&self, x: &FieldElement) -> Result<ElementEncoding> {
        let r = x.to_ring()?;
        let ring = &self.0.ring;
        let coeffs: Vec<Coefficient> = (0..self.0.e)
            .map(|i| {
                let w = ring.coeff(&r, i);
                let v: Vec<i128> = w.iter().map(|&c| ring.md.to_signed(c)).collect();
                Coefficient::from_vec(&v)
            })
            .collect();
        if coeffs[1..].iter().all(|c| *c == Coefficient::Int(0)) {
            if let Coefficient::Int(a) = coeffs[0] {
                return Ok(ElementEncoding::Int(a));
            }
        }
        Ok(ElementEncoding::PiAdic(coeffs))
    }
}

#[cfg(test)]
mod tests;

/// Binomial coefficient C(n, m).
pub(crate) fn binomial(n: u64, m: u64) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..m {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}
