//! Exact rational scalars and their text wire format.
//!
//! Every quantity in the crate is a [`Q`], an arbitrary-precision fraction kept
//! in lowest terms with a positive denominator. On the wire a rational is the
//! string `"p/q"`; integers are written as `"p"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::ParseError;

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `num / den` reduced to lowest terms. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Q {
    frac(1, 2)
}

pub fn parse_q(text: &str) -> Result<Q, ParseError> {
    let text = text.trim();
    let bad = || ParseError::MalformedRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Parses a comma separated list such as `"-1, 3/2, 0"`.
pub fn parse_q_list(text: &str) -> Result<Vec<Q>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_q).collect()
}

pub fn parse_i64_list(text: &str) -> Result<Vec<i64>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| ParseError::MalformedInteger(s.trim().to_string()))
        })
        .collect()
}

pub fn to_wire(q: &Q) -> String {
    q.to_string()
}

pub fn floor_i64(q: &Q) -> i64 {
    q.floor()
        .to_integer()
        .to_i64()
        .expect("integer fits in i64")
}

pub fn ceil_i64(q: &Q) -> i64 {
    q.ceil().to_integer().to_i64().expect("integer fits in i64")
}

/// Integer value of `q` if it has denominator one.
pub fn as_i64(q: &Q) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_half_integer(q: &Q) -> bool {
    (q * int(2)).is_integer()
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary expansion of a finite float.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

pub fn lcm_den(values: &[Q]) -> BigInt {
    values
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn serialize_q<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_wire(q))
}

pub fn deserialize_q<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
    let text = String::deserialize(d)?;
    parse_q(&text).map_err(D::Error::custom)
}

pub fn serialize_q_vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(to_wire))
}

pub fn deserialize_q_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
    let items = Vec::<String>::deserialize(d)?;
    items
        .iter()
        .map(|t| parse_q(t).map_err(D::Error::custom))
        .collect()
}
