//! Exact scalar type and its textual forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// Parses `"p/q"` or an integer literal. Whitespace around the literal is ignored.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['-', '+']) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// `"p/q"`, or `"p"` when the denominator is 1.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Finite decimal expansion when the denominator has only factors 2 and 5.
pub fn exact_decimal(r: &Rational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = (r * Rational::from_integer(BigInt::from(10).pow(digits as u32))).to_integer();
    Some(with_point(&scaled, digits))
}

/// Decimal truncated toward zero to `digits` fractional digits.
pub fn truncated_decimal(r: &Rational, digits: usize) -> String {
    let scaled = (r * Rational::from_integer(BigInt::from(10).pow(digits as u32))).trunc().to_integer();
    if digits == 0 {
        return scaled.to_string();
    }
    let mut s = with_point(&scaled, digits);
    if r.is_negative() && !s.starts_with('-') {
        s.insert(0, '-');
    }
    s
}

fn with_point(scaled: &BigInt, digits: usize) -> String {
    let neg = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    if body.len() <= digits {
        body = "0".repeat(digits - body.len() + 1) + &body;
    }
    let (int_part, frac_part) = body.split_at(body.len() - digits);
    format!("{}{int_part}.{frac_part}", if neg { "-" } else { "" })
}

/// Serde adapter storing a rational as its `"p/q"` string; integers are also accepted on input.
pub mod as_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as \"p/q\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
            parse(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse(" -1/4 ").unwrap(), frac(-1, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("1/-2").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
        assert!(parse("/3").is_err());
    }

    #[test]
    fn format_omits_unit_denominator() {
        assert_eq!(format(&int(4)), "4");
        assert_eq!(format(&frac(-2, 6)), "-1/3");
    }

    #[test]
    fn decimals() {
        assert_eq!(exact_decimal(&frac(1, 8)).unwrap(), "0.125");
        assert_eq!(exact_decimal(&frac(-3, 20)).unwrap(), "-0.15");
        assert_eq!(exact_decimal(&int(7)).unwrap(), "7");
        assert!(exact_decimal(&frac(1, 3)).is_none());
        assert_eq!(truncated_decimal(&frac(1, 3), 4), "0.3333");
        assert_eq!(truncated_decimal(&frac(-1, 3), 2), "-0.33");
        assert_eq!(truncated_decimal(&frac(7, 2), 0), "3");
    }
}
