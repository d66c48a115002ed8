//! Exact rationals and their `"p/q"` string form.
//!
//! Every rational that leaves the library is written as a `"p/q"` string so
//! that threshold comparisons (`k >= 3`, `e < 0`, ...) survive a round trip.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `"p/q"` form, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"`, `"p"`, and surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| err())?;
    let q: BigInt = q.parse().map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Rounds down onto the dyadic grid `2^-bits`.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (r * Rational::from_integer(scale.clone()))
        .floor()
        .to_integer();
    Rational::new(scaled, scale)
}

/// Rounds up onto the dyadic grid `2^-bits`.
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = (r * Rational::from_integer(scale.clone()))
        .ceil()
        .to_integer();
    Rational::new(scaled, scale)
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: `#[serde(with = "crate::rational::serde_str")]`.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

/// Same as [`serde_str`] for `Option<Rational>`.
pub mod serde_opt_str {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::serde_str")] Rational);
        Option::<Wrap>::deserialize(d).map(|o| o.map(|w| w.0))
    }
}

/// Big integers as decimal strings, so JSON readers never round them.
pub mod serde_big {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .trim()
            .parse()
            .map_err(de::Error::custom)
    }
}

/// Same as [`serde_big`] for `Option<BigInt>`.
pub mod serde_opt_big {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.serialize_some(&n.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::serde_big")] BigInt);
        Option::<Wrap>::deserialize(d).map(|o| o.map(|w| w.0))
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }

    fn visit_f64<E: de::Error>(self, _v: f64) -> Result<Rational, E> {
        Err(E::custom(
            "floating-point values are not accepted; use a \"p/q\" string",
        ))
    }
}
