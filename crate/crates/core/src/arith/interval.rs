//! Closed intervals with exact rational endpoints.
//!
//! Every operation returns an interval containing the exact result of the
//! operation applied to any members of the operands.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::rational::{pow, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    /// Builds `[min(a,b), max(a,b)]`.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn point(r: Rational) -> Self {
        RationalInterval { lo: r.clone(), hi: r }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_point(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Certainly strictly above `r`.
    pub fn above(&self, r: &Rational) -> bool {
        &self.lo > r
    }

    /// Certainly strictly below `r`.
    pub fn below(&self, r: &Rational) -> bool {
        &self.hi < r
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RationalInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add_scalar(&self, r: &Rational) -> Self {
        RationalInterval { lo: &self.lo + r, hi: &self.hi + r }
    }

    pub fn sub_scalar(&self, r: &Rational) -> Self {
        RationalInterval { lo: &self.lo - r, hi: &self.hi - r }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::spanning(&self.lo * r, &self.hi * r)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return RationalInterval { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::domain("reciprocal of an interval containing zero"));
        }
        Ok(RationalInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: usize) -> Self {
        if e == 0 {
            return Self::point(Rational::one());
        }
        if !self.lo.is_negative() {
            return RationalInterval { lo: pow(&self.lo, e), hi: pow(&self.hi, e) };
        }
        if !self.hi.is_positive() {
            let r = RationalInterval { lo: pow(&(-&self.hi), e), hi: pow(&(-&self.lo), e) };
            return if e.is_multiple_of(2) { r } else { r.neg() };
        }
        // straddles zero
        let a = pow(&self.lo, e);
        let b = pow(&self.hi, e);
        if e.is_multiple_of(2) {
            RationalInterval { lo: Rational::zero(), hi: a.max(b) }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.mid();
        (
            RationalInterval { lo: self.lo.clone(), hi: m.clone() },
            RationalInterval { lo: m, hi: self.hi.clone() },
        )
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalInterval", 2)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.end()
    }
}

/// Serializes a rational as the string "p/q".
pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
