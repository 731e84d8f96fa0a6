//! Exact rational scalars and their `"p/q"` text form.
//!
//! Every class coordinate, pairing and move parameter in the crate is a
//! [`Rational`]. The text form is the one used by all documents: `"p/q"` with
//! `q > 0`, or plain `"p"` when `q = 1`. Parsing is strict: no whitespace, no
//! leading `+`, no decimal points or exponents, no zero or negative
//! denominators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

fn parse_integer(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Malformed(format!(
            "`{whole}` is not a rational of the form p/q"
        )));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Malformed(format!("`{whole}`: {e}")))
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(s, s)?)),
        Some((p, q)) => {
            if q.starts_with('-') {
                return Err(Error::Malformed(format!(
                    "`{s}`: denominator must be positive"
                )));
            }
            let p = parse_integer(p, s)?;
            let q = parse_integer(q, s)?;
            if q.is_zero() {
                return Err(Error::Malformed(format!("`{s}`: zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical text: `"p"` when the denominator is one, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `x / 2^n`, the step used by the bounded halving searches.
pub fn halve(x: &Rational, n: u32) -> Rational {
    x / Rational::from_integer(BigInt::one() << n)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Lossy conversion, only for reports and the floating-point lab.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// The value as an `i64`, if it is an integer in range.
pub fn to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Serde adapters for `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapters for arrays of `"p/q"` strings.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("0/5").unwrap(), int(0));
    }

    #[test]
    fn rejects_non_canonical_forms() {
        for bad in ["", "1.5", "1e3", "+1", " 1", "1/0", "1/-2", "1/", "/2", "a", "1/2/3", "--1"] {
            assert!(parse_rational(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn halving() {
        assert_eq!(halve(&int(3), 2), ratio(3, 4));
    }
}
