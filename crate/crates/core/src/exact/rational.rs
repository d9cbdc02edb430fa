//! Arbitrary-precision rationals and their canonical text form.
//!
//! The canonical form is `p/q` with `q > 1` and `gcd(|p|, q) = 1`, or `p`
//! alone when the denominator is one. A leading `-` carries the sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses a rational in `p/q` or `p` form. `offset` is added to reported
/// error positions so callers parsing a larger line can point at the
/// offending character.
pub fn parse_rational_at(text: &str, offset: usize) -> Result<Rational> {
    let err = |position: usize, message: &str| Error::Parse {
        position: offset + position,
        message: message.to_string(),
    };
    let lead = text.len() - text.trim_start().len();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err(lead, "empty rational"));
    }
    let (numer, denom, slash) = match trimmed.find('/') {
        Some(idx) => (&trimmed[..idx], Some(&trimmed[idx + 1..]), idx),
        None => (trimmed, None, trimmed.len()),
    };
    let numer = parse_integer(numer, true).ok_or_else(|| err(lead, "invalid numerator"))?;
    let denom = match denom {
        Some(d) => {
            parse_integer(d, false).ok_or_else(|| err(lead + slash + 1, "invalid denominator"))?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err(lead + slash + 1, "zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_rational_at(text, 0)
}

fn parse_integer(text: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => text
            .strip_prefix('+')
            .filter(|_| allow_sign)
            .unwrap_or(text),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let value: BigInt = digits.parse().ok()?;
    Some(if text.starts_with('-') { -value } else { value })
}

/// Canonical string form; identical to `Display` for `BigRational`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // fall back through a scaled quotient when the parts overflow f64
        let n = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = value.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Least common multiple of the denominators, used to clear fractions.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_and_reducible_forms() {
        assert_eq!(parse_rational("-3/7").unwrap(), frac(-3, 7));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("4/6").unwrap(), frac(2, 3));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), frac(1, 2));
        assert_eq!(format_rational(&frac(-6, 14)), "-3/7");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn reports_error_positions() {
        match parse_rational_at("1/0", 10) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 12),
            other => panic!("unexpected {other:?}"),
        }
        match parse_rational("x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            let value = frac(n, d);
            let text = format_rational(&value);
            prop_assert_eq!(parse_rational(&text).unwrap(), value.clone());
            prop_assert_eq!(format_rational(&parse_rational(&text).unwrap()), text);
        }
    }
}
