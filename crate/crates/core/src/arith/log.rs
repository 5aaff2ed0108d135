//! Certified natural logarithm enclosures for positive rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;
use super::rational::{round_dyadic, Rational};
use crate::error::{Error, Result};

const BITS: u32 = 96;

/// Enclosure of `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/3`.
fn two_atanh(z: &Rational) -> RationalInterval {
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rational::zero();
    let mut k = 0u64;
    // terms shrink by at least 9x; 2^-BITS accuracy within ~BITS/3 terms
    let eps = Rational::new(BigInt::one(), BigInt::one() << (BITS + 4));
    loop {
        let t = &term / Rational::from_integer(BigInt::from(2 * k + 1));
        sum += &t;
        term = round_dyadic(&(&term * &z2), BITS + 16, true);
        k += 1;
        if term < eps {
            break;
        }
    }
    // tail of sum_{j>=k} z^{2j+1}/(2j+1) <= term / (1 - z^2), and the rounded
    // terms only overestimate
    let tail = &term / (Rational::one() - &z2);
    let two = Rational::from_integer(2.into());
    let lo = round_dyadic(&(&sum * &two), BITS, false);
    let hi = round_dyadic(&((&sum + &tail) * &two), BITS, true);
    // the rounded power terms overestimate, so the unrounded lower sum is
    // not guaranteed: subtract the accumulated rounding slack
    let slack = Rational::new(BigInt::from(k + 1), BigInt::one() << (BITS + 14));
    RationalInterval::spanning(lo - slack, hi)
}

fn ln2() -> RationalInterval {
    two_atanh(&Rational::new(1.into(), 3.into()))
}

/// Enclosure of `ln(r)` for `r > 0`, accurate to roughly `2^-90`.
pub fn ln(r: &Rational) -> Result<RationalInterval> {
    if !r.is_positive() {
        return Err(Error::domain("logarithm of a non-positive number"));
    }
    if r.is_one() {
        return Ok(RationalInterval::zero());
    }
    // r = 2^e * m with m in [1, 2)
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let mut e = nb - db;
    let two = Rational::from_integer(2.into());
    let mut m = if e >= 0 {
        r / Rational::from_integer(BigInt::one() << e as u64)
    } else {
        r * Rational::from_integer(BigInt::one() << (-e) as u64)
    };
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < Rational::one() {
        m *= &two;
        e -= 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), (m-1)/(m+1) in [0, 1/3)
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let lm = two_atanh(&z);
    let le = ln2().scale(&Rational::from_integer(e.into()));
    Ok(lm.add(&le))
}

pub fn ln_interval(x: &RationalInterval) -> Result<RationalInterval> {
    let a = ln(x.lo())?;
    let b = ln(x.hi())?;
    Ok(RationalInterval::spanning(a.lo().clone(), b.hi().clone()))
}
