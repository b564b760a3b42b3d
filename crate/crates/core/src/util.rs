//! Serde adapters writing exact numbers as decimal strings (`"p/q"` for
//! rationals), so reports never contain floats or lossy integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }
}

pub mod rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&rat_to_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))).collect()
    }
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))
    }
}

pub mod int_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))).collect()
    }
}
