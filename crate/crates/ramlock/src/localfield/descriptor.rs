//! Serializable descriptors for fields and field elements.
//!
//! A coefficient over the unramified subring is either a plain integer or a
//! list of integers (a polynomial in the unramified generator, low to high).
//! Field elements are either integers or lists of such coefficients (a
//! polynomial in the uniformizer).

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Int(i128),
    Poly(Vec<i128>),
}

impl Coefficient {
    /// Coefficient vector of length `f`, or None if it does not fit.
    pub fn to_vec(&self, f: usize) -> Option<Vec<i128>> {
        match self {
            Coefficient::Int(a) => {
                let mut v = vec![0; f];
                v[0] = *a;
                Some(v)
            }
            Coefficient::Poly(c) => {
                if c.len() > f && c[f..].iter().any(|&x| x != 0) {
                    return None;
                }
                let mut v = vec![0; f];
                for (i, &x) in c.iter().take(f).enumerate() {
                    v[i] = x;
                }
                Some(v)
            }
        }
    }

    /// Canonical encoding: a plain integer when only the constant slot is set.
    pub fn from_vec(v: &[i128]) -> Coefficient {
        if v.iter().skip(1).all(|&x| x == 0) {
            Coefficient::Int(v.first().copied().unwrap_or(0))
        } else {
            let mut c = v.to_vec();
            while c.len() > 1 && *c.last().unwrap() == 0 {
                c.pop();
            }
            Coefficient::Poly(c)
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Coefficient::Int(a) => serialize_int(*a, s),
            Coefficient::Poly(c) => {
                let mut seq = s.serialize_seq(Some(c.len()))?;
                for x in c {
                    seq.serialize_element(&IntOut(*x))?;
                }
                seq.end()
            }
        }
    }
}

struct IntOut(i128);

impl Serialize for IntOut {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int(self.0, s)
    }
}

fn serialize_int<S: Serializer>(a: i128, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(a) {
        Ok(small) => s.serialize_i64(small),
        Err(_) => s.serialize_i128(a),
    }
}

struct IntIn(i128);

impl<'de> Deserialize<'de> for IntIn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntIn;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntIn, E> {
                Ok(IntIn(v as i128))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntIn, E> {
                Ok(IntIn(v as i128))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> Result<IntIn, E> {
                Ok(IntIn(v))
            }
            fn visit_u128<E: de::Error>(self, v: u128) -> Result<IntIn, E> {
                i128::try_from(v).map(IntIn).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Coefficient;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a list of integers")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Coefficient, E> {
                Ok(Coefficient::Int(v as i128))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Coefficient, E> {
                Ok(Coefficient::Int(v as i128))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> Result<Coefficient, E> {
                Ok(Coefficient::Int(v))
            }
            fn visit_u128<E: de::Error>(self, v: u128) -> Result<Coefficient, E> {
                i128::try_from(v).map(Coefficient::Int).map_err(E::custom)
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Coefficient, A::Error> {
                let mut out = vec![];
                while let Some(IntIn(x)) = seq.next_element()? {
                    out.push(x);
                }
                Ok(Coefficient::Poly(out))
            }
        }
        d.deserialize_any(V)
    }
}

/// Encoding of an element of O_k: an integer, or a list of coefficients
/// (each a [`Coefficient`]) of 1, pi, pi^2, ...
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementEncoding {
    Int(i128),
    PiAdic(Vec<Coefficient>),
}

impl Serialize for ElementEncoding {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ElementEncoding::Int(a) => serialize_int(*a, s),
            ElementEncoding::PiAdic(c) => c.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ElementEncoding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ElementEncoding;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a list of coefficients")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ElementEncoding, E> {
                Ok(ElementEncoding::Int(v as i128))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ElementEncoding, E> {
                Ok(ElementEncoding::Int(v as i128))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> Result<ElementEncoding, E> {
                Ok(ElementEncoding::Int(v))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ElementEncoding, A::Error> {
                let mut out = vec![];
                while let Some(c) = seq.next_element::<Coefficient>()? {
                    out.push(c);
                }
                Ok(ElementEncoding::PiAdic(out))
            }
        }
        d.deserialize_any(V)
    }
}

/// `{ p, f, eisenstein, prec }` with Eisenstein coefficients low to high.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub f: usize,
    pub eisenstein: Vec<Coefficient>,
    pub prec: u32,
}

impl FieldDescriptor {
    pub fn new(p: u64, f: usize, eisenstein: &[i128], prec: u32) -> Self {
        FieldDescriptor {
            p,
            f,
            eisenstein: eisenstein.iter().map(|&c| Coefficient::Int(c)).collect(),
            prec,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn to_toml(&self) -> crate::error::Result<String> {
        toml::to_string(self).map_err(|e| crate::error::Error::InvalidDescriptor(e.to_string()))
    }

    pub fn from_json(s: &str) -> crate::error::Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::error::Error::InvalidDescriptor(e.to_string()))
    }

    pub fn from_toml(s: &str) -> crate::error::Result<Self> {
        toml::from_str(s).map_err(|e| crate::error::Error::InvalidDescriptor(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_coefficients_round_trip() {
        let json = r#"{"p":3,"f":2,"eisenstein":[-48,0,0,0,24,0,0,0,1],"prec":24}"#;
        let d = FieldDescriptor::from_json(json).unwrap();
        assert_eq!(d.to_json(), json);
        let json2 = r#"{"p":3,"f":2,"eisenstein":[[3,3],0,1],"prec":10}"#;
        let d2 = FieldDescriptor::from_json(json2).unwrap();
        assert_eq!(d2.eisenstein[0], Coefficient::Poly(vec![3, 3]));
        assert_eq!(d2.to_json(), json2);
    }

    #[test]
    fn toml_input() {
        let d = FieldDescriptor::from_toml("p = 3\nf = 1\neisenstein = [3, 3, 1]\nprec = 30\n").unwrap();
        assert_eq!(d, FieldDescriptor::new(3, 1, &[3, 3, 1], 30));
        let back = FieldDescriptor::from_toml(&d.to_toml().unwrap()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn element_encodings() {
        let e: ElementEncoding = serde_json::from_str("[1, [0, 1], 2]").unwrap();
        assert_eq!(
            e,
            ElementEncoding::PiAdic(vec![
                Coefficient::Int(1),
                Coefficient::Poly(vec![0, 1]),
                Coefficient::Int(2)
            ])
        );
        let i: ElementEncoding = serde_json::from_str("-7").unwrap();
        assert_eq!(i, ElementEncoding::Int(-7));
    }
}
