//! Helpers around [`BigRational`]: construction, parsing and decimal output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow(r: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    let mut base = r.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Parses `p/q`, an integer, a decimal (`1.79`) or scientific notation (`1e-8`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut r = Rational::from_integer(n);
    if scale >= 0 {
        r *= pow(&ten, scale as usize);
    } else {
        r /= pow(&ten, (-scale) as usize);
    }
    Ok(if neg { -r } else { r })
}

/// Decimal string with `digits` fractional digits, rounded toward -inf (`up = false`) or +inf.
pub fn to_decimal(r: &Rational, digits: usize, up: bool) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.is_negative();
    let (q, rem) = n.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{q}.{:0>width$}", rem.to_string(), width = digits)
}

/// `2^-bits`.
pub fn two_pow_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// Nearest `f64`, for diagnostics and test oracles only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Smallest dyadic `k / 2^bits` that is `>= r` (`up`) or largest `<= r`.
pub fn round_dyadic(r: &Rational, bits: u32, up: bool) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = r * Rational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() };
    n / Rational::from_integer(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("1.79").unwrap(), ratio(179, 100));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("1e-8").unwrap(), ratio(1, 100_000_000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_rounding_is_directed() {
        let third = ratio(1, 3);
        assert_eq!(to_decimal(&third, 4, false), "0.3333");
        assert_eq!(to_decimal(&third, 4, true), "0.3334");
        assert_eq!(to_decimal(&ratio(-1, 3), 2, false), "-0.34");
        assert_eq!(to_decimal(&int(2), 3, true), "2.000");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let r = ratio(1, 3);
        assert!(round_dyadic(&r, 10, false) <= r);
        assert!(round_dyadic(&r, 10, true) >= r);
    }
}
