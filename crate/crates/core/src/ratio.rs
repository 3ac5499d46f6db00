//! Exact rational helpers. Everything that is compared against a fraction of
//! a bound goes through [`Q`], so there is no floating point anywhere in the
//! decision logic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn int(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("value out of range")
}

pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("value out of range")
}

/// Floor of a non-negative rational as `u64`. Negative values clamp to zero.
pub fn floor_u64(x: &Q) -> u64 {
    if x.is_negative() {
        0
    } else {
        x.floor().to_integer().to_u64().expect("value out of range")
    }
}

pub fn ceil_u64(x: &Q) -> u64 {
    if x.is_negative() {
        0
    } else {
        x.ceil().to_integer().to_u64().expect("value out of range")
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `max(x, 0)`
pub fn pos(x: Q) -> Q {
    if x.is_negative() {
        Q::zero()
    } else {
        x
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Reduced `num/den` text form. Integers are printed as `n/1`.
pub fn format(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatioError(pub String);

impl fmt::Display for ParseRatioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse `{}` as a rational", self.0)
    }
}

impl std::error::Error for ParseRatioError {}

/// Accepts `n`, `n/d` and plain decimals such as `0.25`.
pub fn parse(s: &str) -> Result<Q, ParseRatioError> {
    let err = || ParseRatioError(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((a, b)) = t.split_once('.') {
        if b.is_empty() || !b.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = a.starts_with('-');
        let whole: BigInt = if a.is_empty() || a == "-" {
            BigInt::zero()
        } else {
            a.parse().map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(b.len() as u32);
        let fracpart: BigInt = b.parse().map_err(|_| err())?;
        let mut v = Q::from_integer(whole.abs()) + Q::new(fracpart, scale);
        if neg {
            v = -v;
        }
        return Ok(v);
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Least common multiple of the denominators, handy for scaling a set of
/// rationals onto an integer grid.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub mod serde_q {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}
