//! JSON encoding for arbitrary-precision integers.
//!
//! Values that fit in an `i64` are written as plain JSON numbers, anything
//! larger as a decimal string. Both forms are accepted on input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) struct Ser<'a>(pub &'a BigInt);

impl Serialize for Ser<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) struct De(pub BigInt);

impl<'de> Deserialize<'de> for De {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = De;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<De, E> {
                Ok(De(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<De, E> {
                Ok(De(BigInt::from(v)))
            }

            fn visit_i128<E: de::Error>(self, v: i128) -> Result<De, E> {
                Ok(De(BigInt::from(v)))
            }

            fn visit_u128<E: de::Error>(self, v: u128) -> Result<De, E> {
                Ok(De(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<De, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(De)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(V)
    }
}

/// `#[serde(with = "posetcox::serde_int::single")]` for a lone `BigInt` field.
pub mod single {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Ser(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        De::deserialize(d).map(|v| v.0)
    }
}

/// `#[serde(with = "posetcox::serde_int::seq")]` for a `Vec<BigInt>` field.
pub mod seq {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Ser(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<De> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|x| x.0).collect())
    }
}
