//! Exact rational values and their textual form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serializer};

/// Exact rational number used for every function value and coefficient.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_u64(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` into a reduced rational.
pub fn parse_q(text: &str) -> Result<Q, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| format!("bad numerator in {text:?}: {e}"))?;
    let den = BigInt::from_str(den).map_err(|e| format!("bad denominator in {text:?}: {e}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Q::new(num, den))
}

/// Serde adapter storing a [`Q`] as its `p/q` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Q>`.
pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_q(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(format_q(&q_frac(6, -4)), "-3/2");
        assert_eq!(format_q(&q(7)), "7");
        assert_eq!(parse_q(" -3/2 ").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_q("10/5").unwrap(), q(2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
