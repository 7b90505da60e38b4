//! Small helpers around arbitrary-precision rationals.
//!
//! Everything numeric in the exponent and scheme calculus is a
//! [`BigRational`]; floats appear only when the caller explicitly asks for a
//! float rendering (reports) or runs the float-mode audit of the case check.

use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

/// The integer `n` as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `n/d` as a reduced rational. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `k choose 2` as a rational.
pub fn choose2(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k) * BigInt::from(k.saturating_sub(1)) / 2)
}

/// Renders a rational as `"p/q"` in lowest terms, always with an explicit
/// denominator so serialized values have a uniform shape.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, a plain integer, or a plain decimal such as `"0.0134"`.
pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Format("empty rational".into()));
    }
    if text.contains('/') {
        return BigRational::from_str(text)
            .map_err(|e| Error::Format(format!("bad rational {text:?}: {e}")));
    }
    if let Some((whole, fract)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let joined = format!("{whole_digits}{fract}");
        let numer = BigInt::from_str(&joined)
            .map_err(|e| Error::Format(format!("bad decimal {text:?}: {e}")))?;
        let denom = BigInt::from(10u32).pow(fract.len() as u32);
        let value = BigRational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(text)
        .map(BigRational::from_integer)
        .map_err(|e| Error::Format(format!("bad integer {text:?}: {e}")))
}

/// Rounds to three decimals, halves away from zero, and renders the result
/// as a fixed-point string such as `"0.462"`.
pub fn round3_half_away(r: &BigRational) -> String {
    let scaled = (r * int(1000)).round().to_integer();
    let negative = scaled.is_negative();
    let magnitude = scaled.magnitude().clone();
    let thousand = magnitude.clone() / 1000u32;
    let rem = magnitude % 1000u32;
    let sign = if negative { "-" } else { "" };
    format!("{sign}{thousand}.{rem:03}")
}

/// Nearest `f64` to the rational (infinite on overflow).
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to the given finite float.
pub fn from_f64_exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidParams(format!("non-finite value {x} has no rational form")))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow_u32(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Serde helper: serialize a rational as its `"p/q"` string.
pub fn serialize_ratio<S: Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// True if the rational is exactly zero (convenience re-export for callers
/// that do not want to import the `Zero` trait).
pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_ratio(&frac(6, 13)), "6/13");
        assert_eq!(format_ratio(&int(0)), "0/1");
        assert_eq!(format_ratio(&frac(-9, 13)), "-9/13");
        assert_eq!(format_ratio(&frac(4, 8)), "1/2");
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_ratio("6/13").unwrap(), frac(6, 13));
        assert_eq!(parse_ratio("7").unwrap(), int(7));
        assert_eq!(parse_ratio("0.0134").unwrap(), frac(134, 10000));
        assert_eq!(parse_ratio("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse_ratio("1.5").unwrap(), frac(3, 2));
        assert!(parse_ratio("").is_err());
        assert!(parse_ratio("x/y").is_err());
    }

    #[test]
    fn rounds_three_decimals_half_away_from_zero() {
        assert_eq!(round3_half_away(&frac(6, 13)), "0.462");
        assert_eq!(round3_half_away(&frac(1, 8)), "0.125");
        assert_eq!(round3_half_away(&frac(1, 2000)), "0.001");
        assert_eq!(round3_half_away(&frac(-1, 2000)), "-0.001");
        assert_eq!(round3_half_away(&frac(1, 10000)), "0.000");
        assert_eq!(round3_half_away(&frac(-1, 10000)), "0.000");
        assert_eq!(round3_half_away(&frac(3, 2)), "1.500");
        assert_eq!(round3_half_away(&frac(15, 32)), "0.469");
    }

    #[test]
    fn decimal_round_trip_is_exact() {
        let g = parse_ratio("0.0134").unwrap();
        assert_eq!(g, frac(67, 5000));
        assert!((to_f64(&g) - 0.0134).abs() < 1e-15);
    }
}
