//! Real algebraic numbers held as a squarefree defining polynomial plus an
//! isolating interval, with exact sign determination of polynomial
//! expressions at the number.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;
use super::poly::Poly;
use super::rational::{ratio, Rational};
use crate::error::{Error, Result};

/// Bisection steps allowed when a sign cannot be read off the current enclosure.
pub const DEFAULT_REFINEMENTS: usize = 4000;

#[derive(Clone, Debug)]
enum Isolation {
    /// The number is this rational.
    Exact(Rational),
    /// Exactly one root of the polynomial in the open interval; neither
    /// endpoint is a root.
    Open(Rational, Rational),
}

struct Inner {
    poly: Poly,
    iso: RwLock<Isolation>,
    refinements: usize,
}

#[derive(Clone)]
pub struct AlgebraicReal {
    inner: Arc<Inner>,
}

fn sign(r: &Rational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl AlgebraicReal {
    pub fn from_rational(r: Rational) -> Self {
        let poly = Poly::new(vec![-r.clone(), Rational::one()]);
        AlgebraicReal {
            inner: Arc::new(Inner { poly, iso: RwLock::new(Isolation::Exact(r)), refinements: DEFAULT_REFINEMENTS }),
        }
    }

    /// The unique root of `poly` in `[lo, hi]`. Fails unless the closed
    /// interval holds exactly one distinct root.
    pub fn isolate(poly: &Poly, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("isolating interval is empty"));
        }
        if poly.is_constant() {
            return Err(Error::domain("constant polynomial has no isolated root"));
        }
        let sq = poly.squarefree();
        let at_lo = sq.eval(&lo).is_zero();
        let at_hi = sq.eval(&hi).is_zero();
        let interior = if lo == hi { 0 } else { sq.count_roots(&lo, &hi) - usize::from(at_hi) };
        let total = interior + usize::from(at_lo) + usize::from(at_hi && lo != hi);
        if total != 1 {
            return Err(Error::domain(format!("interval [{lo}, {hi}] holds {total} roots, expected 1")));
        }
        let linear = (sq.degree() == Some(1)).then(|| -sq.constant_term() / sq.lead().unwrap());
        let iso = if let Some(r) = linear {
            Isolation::Exact(r)
        } else if at_lo {
            Isolation::Exact(lo)
        } else if at_hi {
            Isolation::Exact(hi)
        } else {
            Isolation::Open(lo, hi)
        };
        let (poly, iso) = match iso {
            Isolation::Exact(r) => (Poly::new(vec![-r.clone(), Rational::one()]), Isolation::Exact(r)),
            open => (sq, open),
        };
        Ok(AlgebraicReal { inner: Arc::new(Inner { poly, iso: RwLock::new(iso), refinements: DEFAULT_REFINEMENTS }) })
    }

    pub fn poly(&self) -> &Poly {
        &self.inner.poly
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match &*self.inner.iso.read().unwrap() {
            Isolation::Exact(r) => Some(r.clone()),
            Isolation::Open(..) => None,
        }
    }

    pub fn enclosure(&self) -> RationalInterval {
        match &*self.inner.iso.read().unwrap() {
            Isolation::Exact(r) => RationalInterval::point(r.clone()),
            Isolation::Open(lo, hi) => RationalInterval::spanning(lo.clone(), hi.clone()),
        }
    }

    /// One bisection step; returns false once the number is known exactly.
    fn bisect_once(&self) -> bool {
        let mut iso = self.inner.iso.write().unwrap();
        let (lo, hi) = match &*iso {
            Isolation::Exact(_) => return false,
            Isolation::Open(lo, hi) => (lo.clone(), hi.clone()),
        };
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let p = &self.inner.poly;
        let sm = sign(&p.eval(&mid));
        if sm == Ordering::Equal {
            *iso = Isolation::Exact(mid);
            return false;
        }
        let sl = sign(&p.eval(&lo));
        *iso = if sl != sm { Isolation::Open(lo, mid) } else { Isolation::Open(mid, hi) };
        true
    }

    /// Shrinks the isolating interval until its width is at most `width`.
    pub fn refine_to(&self, width: &Rational) -> RationalInterval {
        loop {
            let e = self.enclosure();
            if &e.width() <= width || !self.bisect_once() {
                return self.enclosure();
            }
        }
    }

    /// Exact sign of `p` evaluated at this number.
    pub fn sign_of(&self, p: &Poly) -> Result<Ordering> {
        if let Some(r) = self.as_rational() {
            return Ok(sign(&p.eval(&r)));
        }
        let p = p.rem(&self.inner.poly);
        if p.is_constant() {
            return Ok(sign(&p.constant_term()));
        }
        let mut gcd_checked = false;
        for _ in 0..self.inner.refinements {
            let e = self.enclosure();
            if let Some(r) = e.as_point() {
                return Ok(sign(&p.eval(r)));
            }
            let v = p.eval_interval(&e);
            if v.lo().is_positive() {
                return Ok(Ordering::Greater);
            }
            if v.hi().is_negative() {
                return Ok(Ordering::Less);
            }
            if !gcd_checked {
                gcd_checked = true;
                let g = Poly::gcd(&p, &self.inner.poly);
                if g.degree().unwrap_or(0) >= 1 {
                    // the poly's roots are simple and the endpoints are not roots
                    if sign(&g.eval(e.lo())) != sign(&g.eval(e.hi())) {
                        return Ok(Ordering::Equal);
                    }
                }
            }
            self.bisect_once();
        }
        Err(Error::PrecisionExhausted { position: 0 })
    }

    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        self.sign_of(&Poly::new(vec![-r.clone(), Rational::one()]))
    }

    pub fn to_f64(&self) -> f64 {
        let e = self.refine_to(&ratio(1, 1 << 60));
        super::rational::to_f64(&e.mid())
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {:?} in {:?}", self.inner.poly, self.enclosure())
    }
}

/// Element of Q(q) as `num(q) / den(q)` with `den(q) > 0`, both reduced
/// modulo the defining polynomial of `q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

impl FieldElem {
    pub fn rational(r: Rational) -> Self {
        FieldElem { num: Poly::constant(r), den: Poly::one() }
    }

    /// Caller guarantees `den > 0` at the field generator.
    pub(crate) fn from_parts(q: &AlgebraicReal, num: Poly, den: Poly) -> Self {
        FieldElem { num: q.reduce(&num), den: q.reduce(&den) }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }
}

impl AlgebraicReal {
    pub(crate) fn reduce(&self, p: &Poly) -> Poly {
        if let Some(r) = self.as_rational() {
            return Poly::constant(p.eval(&r));
        }
        p.rem(&self.inner.poly)
    }

    pub fn elem_sign(&self, e: &FieldElem) -> Result<Ordering> {
        self.sign_of(&e.num)
    }

    pub fn elem_sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if a.den == b.den {
            return FieldElem { num: self.reduce(&a.num.sub(&b.num)), den: a.den.clone() };
        }
        FieldElem {
            num: self.reduce(&a.num.mul(&b.den).sub(&b.num.mul(&a.den))),
            den: self.reduce(&a.den.mul(&b.den)),
        }
    }

    /// `sign(a - b)`.
    pub fn elem_cmp(&self, a: &FieldElem, b: &FieldElem) -> Result<Ordering> {
        self.elem_sign(&self.elem_sub(a, b))
    }

    /// `q * a - d`.
    pub fn elem_step(&self, a: &FieldElem, d: &Rational) -> FieldElem {
        let num = a.num.shift_up(1).sub(&a.den.scale(d));
        FieldElem { num: self.reduce(&num), den: a.den.clone() }
    }

    pub fn elem_enclosure(&self, a: &FieldElem) -> Result<RationalInterval> {
        let q = self.enclosure();
        let n = a.num.eval_interval(&q);
        let d = a.den.eval_interval(&q);
        if d.contains_zero() {
            // den is positive at the root; tighten until the enclosure shows it
            self.refine_to(&(q.width() / Rational::from_integer(1024.into())));
            let q = self.enclosure();
            return a.num.eval_interval(&q).div(&a.den.eval_interval(&q));
        }
        n.div(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn golden() -> AlgebraicReal {
        AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, 1]), int(1), int(2)).unwrap()
    }

    #[test]
    fn isolation_requires_single_root() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        assert!(AlgebraicReal::isolate(&p, int(-2), int(2)).is_err());
        assert!(AlgebraicReal::isolate(&p, int(0), int(2)).is_ok());
        let r = AlgebraicReal::isolate(&Poly::from_ints(&[-3, 2]), int(0), int(5)).unwrap();
        assert_eq!(r.as_rational(), Some(ratio(3, 2)));
    }

    #[test]
    fn exact_zero_detection() {
        let phi = golden();
        // phi^2 - phi - 1 = 0 and phi^3 - 2 phi - 1 = 0
        assert_eq!(phi.sign_of(&Poly::from_ints(&[-1, -1, 1])).unwrap(), Ordering::Equal);
        assert_eq!(phi.sign_of(&Poly::from_ints(&[-1, -2, 0, 1])).unwrap(), Ordering::Equal);
        assert_eq!(phi.cmp_rational(&ratio(1618, 1000)).unwrap(), Ordering::Greater);
        assert_eq!(phi.cmp_rational(&ratio(1619, 1000)).unwrap(), Ordering::Less);
    }

    #[test]
    fn zero_via_reducible_factor() {
        // (x^2 - 2)(x - 3): the root sqrt 2 makes x^2 - 2 vanish although it
        // is not the full defining polynomial
        let p = Poly::from_ints(&[-2, 0, 1]).mul(&Poly::from_ints(&[-3, 1]));
        let r = AlgebraicReal::isolate(&p, int(1), int(2)).unwrap();
        assert_eq!(r.sign_of(&Poly::from_ints(&[-2, 0, 1])).unwrap(), Ordering::Equal);
        assert_eq!(r.sign_of(&Poly::from_ints(&[-3, 1])).unwrap(), Ordering::Less);
    }

    #[test]
    fn field_arithmetic() {
        let phi = golden();
        // 1/phi + 1/phi^2 == 1: represent as (phi + 1)/phi^2
        let a = FieldElem::from_parts(&phi, Poly::from_ints(&[1, 1]), Poly::from_ints(&[0, 0, 1]));
        let one = FieldElem::rational(int(1));
        assert_eq!(phi.elem_cmp(&a, &one).unwrap(), Ordering::Equal);
        let e = phi.elem_enclosure(&a).unwrap();
        assert!(e.contains(&int(1)));
    }
}
