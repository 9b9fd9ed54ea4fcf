//! Serde adapters that keep rationals exact in config files.
//!
//! Rationals are written as `"p/q"` strings (or `"p"` for integers). On input
//! we also accept bare integers and decimal strings like `"9.19"`.

use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use std::fmt;

use crate::cost::{format_rational, int, parse_rational, Rational};

pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
    deserializer.deserialize_any(RationalVisitor)
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string such as \"1/3\" or \"9.19\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        i64::try_from(v)
            .map(int)
            .map_err(|_| E::custom(format!("integer {v} too large")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }
}

/// `Wrapper` lets sequences of rationals reuse the visitor.
#[derive(serde::Deserialize)]
struct Wrapper(#[serde(deserialize_with = "deserialize")] Rational);

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<Wrapper>::deserialize(deserializer)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

pub mod map {
    use super::*;
    use serde::ser::SerializeMap;
    use serde::Deserialize;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(values: &BTreeMap<String, Rational>, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(values.len()))?;
        for (k, v) in values {
            map.serialize_entry(k, &format_rational(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BTreeMap<String, Rational>, D::Error> {
        let raw = BTreeMap::<String, Wrapper>::deserialize(deserializer)?;
        Ok(raw.into_iter().map(|(k, w)| (k, w.0)).collect())
    }
}

pub mod domain {
    use super::*;
    use crate::cost::Domain;

    pub fn serialize<S: Serializer>(value: &Domain, serializer: S) -> Result<S::Ok, S::Error> {
        super::vec::serialize(&[value.lo().clone(), value.hi().clone()], serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Domain, D::Error> {
        let bounds = super::vec::deserialize(deserializer)?;
        match <[Rational; 2]>::try_from(bounds) {
            Ok([lo, hi]) => Domain::new(lo, hi).map_err(de::Error::custom),
            Err(_) => Err(de::Error::custom("domain must be [lo, hi]")),
        }
    }
}
