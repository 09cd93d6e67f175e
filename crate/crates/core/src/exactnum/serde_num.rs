//! Serde adapters writing big numbers as decimal strings (`"p/q"` for
//! rationals). Plain JSON integers are accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serializer};

use super::rational::{format_rational, parse_rational, Q};

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Int(i64),
    Str(String),
}

fn parse_bigint<E: serde::de::Error>(v: NumOrStr) -> Result<BigInt, E> {
    match v {
        NumOrStr::Int(i) => Ok(BigInt::from(i)),
        NumOrStr::Str(s) => s.trim().parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
    }
}

fn parse_q<E: serde::de::Error>(v: NumOrStr) -> Result<Q, E> {
    match v {
        NumOrStr::Int(i) => Ok(Q::from_integer(BigInt::from(i))),
        NumOrStr::Str(s) => parse_rational(&s).ok_or_else(|| E::custom(format!("bad rational {s:?}"))),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        parse_bigint(NumOrStr::deserialize(d)?)
    }
}

pub mod bigint_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<NumOrStr>::deserialize(d)?.into_iter().map(parse_bigint).collect()
    }
}

pub mod bigint_mat {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<NumOrStr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(parse_bigint).collect())
            .collect()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        parse_q(NumOrStr::deserialize(d)?)
    }
}

pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<NumOrStr>::deserialize(d)?.into_iter().map(parse_q).collect()
    }
}

pub mod rational_mat {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let r: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        Vec::<Vec<NumOrStr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(parse_q).collect())
            .collect()
    }
}

