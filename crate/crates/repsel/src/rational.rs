//! Parsing, formatting, and display helpers for exact rationals.
//!
//! Everything on the exact computation path is a [`BigRational`]. Files and
//! reports exchange them as strings: either `"p/q"` with decimal integers and
//! `q > 0`, or a plain decimal such as `"0.4"` (converted exactly from its
//! decimal representation, so `"0.4"` becomes `2/5`).

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Shorthand for building a rational from machine integers.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"`, an integer, or a decimal (with optional exponent) into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(err());
    }

    if let Some((numer, denom)) = s.split_once('/') {
        let p: BigInt = numer.trim().parse().map_err(|_| err())?;
        let q: BigInt = denom.trim().parse().map_err(|_| err())?;
        if q <= BigInt::zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }

    // Decimal form: [sign] digits [. digits] [e|E [sign] digits]
    let (mantissa, exponent) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "+" || digits == "-" {
        return Err(err());
    }
    let unscaled: BigInt = digits.parse().map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let rational = if scale >= 0 {
        BigRational::from_integer(unscaled * ten.pow(scale as u32))
    } else {
        BigRational::new(unscaled, ten.pow(-scale as u32))
    };
    Ok(rational)
}

/// Renders a rational as `"p/q"`, or just `"p"` when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a rational truncated toward zero to two decimals, e.g. `13/15`
/// becomes `"0.86"`.
pub fn truncate_two_decimals(r: &BigRational) -> String {
    let hundred = BigRational::from_integer(BigInt::from(100));
    let scaled = (r.abs() * hundred).floor();
    let cents = scaled.numer() / scaled.denom();
    let sign = if r.is_negative() && !cents.is_zero() {
        "-"
    } else {
        ""
    };
    let whole = &cents / BigInt::from(100);
    let frac = &cents % BigInt::from(100);
    format!("{sign}{whole}.{frac:02}")
}

/// Nearest-f64 view of a rational, for estimates and rendering.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
