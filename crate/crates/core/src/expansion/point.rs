//! Points of `I_q` and the remainder map `r ↦ q r - d`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::arith::rational::int;
use crate::arith::{pi_exact, eval_pi, BaseEnclosure, FieldElem, Poly, Rational, RationalInterval};
use crate::error::{Error, Result};
use crate::sequence::EventuallyPeriodicSeq;

/// A real number handled exactly when the base allows it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    /// A rational at a rational base.
    Rat(Rational),
    /// An element of `Q(q)` at an algebraic base.
    Alg(FieldElem),
    /// Known only through an enclosure.
    Approx(RationalInterval),
}

/// Which signs a quantity may have given what is known about it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SignSet {
    pub neg: bool,
    pub zero: bool,
    pub pos: bool,
}

impl SignSet {
    fn exact(o: Ordering) -> Self {
        SignSet { neg: o == Ordering::Less, zero: o == Ordering::Equal, pos: o == Ordering::Greater }
    }

    fn of_interval(v: &RationalInterval) -> Self {
        SignSet { neg: v.lo().is_negative(), zero: v.contains_zero(), pos: v.hi().is_positive() }
    }

    fn of_rational(r: &Rational) -> Self {
        Self::exact(r.cmp(&Rational::zero()))
    }
}

/// Three-valued answer to a yes/no question.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tri {
    Yes,
    No,
    Unknown,
}

impl Point {
    /// `x` as a point, exact whenever `x` is a single rational and the base is exact.
    pub fn from_interval(base: &BaseEnclosure, x: &RationalInterval) -> Point {
        match (x.as_point(), base.as_rational(), base.exact()) {
            (Some(r), Some(_), _) => Point::Rat(r.clone()),
            (Some(r), None, Some(_)) => Point::Alg(FieldElem::rational(r.clone())),
            _ => Point::Approx(x.clone()),
        }
    }

    /// `π_q(s)`.
    pub fn pi(base: &BaseEnclosure, s: &EventuallyPeriodicSeq) -> Result<Point> {
        let v = eval_pi(base, s, 1)?;
        if base.as_rational().is_some() {
            return Ok(Point::Rat(v.lo().clone()));
        }
        Ok(match pi_exact(base, s) {
            Some(e) => Point::Alg(e),
            None => Point::Approx(v),
        })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Point::Approx(_))
    }

    pub fn enclosure(&self, base: &BaseEnclosure) -> Result<RationalInterval> {
        match self {
            Point::Rat(r) => Ok(RationalInterval::point(r.clone())),
            Point::Alg(e) => base.exact().expect("algebraic point needs an exact base").elem_enclosure(e),
            Point::Approx(v) => Ok(v.clone()),
        }
    }

    /// `q r - d`.
    pub fn step(&self, base: &BaseEnclosure, d: u32) -> Point {
        let d = int(d as i64);
        match self {
            Point::Rat(r) => Point::Rat(base.as_rational().expect("rational base") * r - d),
            Point::Alg(e) => Point::Alg(base.exact().expect("exact base").elem_step(e, &d)),
            Point::Approx(v) => Point::Approx(base.q().mul(v).sub_scalar(&d)),
        }
    }

    /// `self - other`, when both are of the same kind.
    pub fn sub(&self, base: &BaseEnclosure, other: &Point) -> Result<Point> {
        Ok(match (self, other) {
            (Point::Rat(a), Point::Rat(b)) => Point::Rat(a - b),
            (Point::Alg(a), Point::Alg(b)) => Point::Alg(base.exact().expect("exact base").elem_sub(a, b)),
            (a, b) => Point::Approx(a.enclosure(base)?.sub(&b.enclosure(base)?)),
        })
    }

    pub(crate) fn sign(&self, base: &BaseEnclosure) -> Result<SignSet> {
        Ok(match self {
            Point::Rat(r) => SignSet::of_rational(r),
            Point::Alg(e) => SignSet::exact(base.exact().expect("exact base").elem_sign(e)?),
            Point::Approx(v) => SignSet::of_interval(v),
        })
    }

    /// Signs of `self - M/(q-1)`.
    pub(crate) fn sign_vs_top(&self, base: &BaseEnclosure) -> Result<SignSet> {
        let m = int(base.m() as i64);
        Ok(match self {
            Point::Rat(r) => {
                let q = base.as_rational().expect("rational base");
                SignSet::of_rational(&(r * (q - Rational::one()) - m))
            }
            Point::Alg(e) => {
                let q = base.exact().expect("exact base");
                // den(q) > 0 and q - 1 > 0
                let p = e.numerator().mul(&Poly::from_ints(&[-1, 1])).sub(&e.denominator().scale(&m));
                SignSet::exact(q.sign_of(&p)?)
            }
            Point::Approx(v) => SignSet::of_interval(&v.sub(&base.i_q_hi())),
        })
    }

    /// Is the point in `I_q = [0, M/(q-1)]`?
    pub(crate) fn in_iq(&self, base: &BaseEnclosure) -> Result<Tri> {
        let lo = self.sign(base)?;
        if !lo.zero && !lo.pos {
            return Ok(Tri::No);
        }
        let hi = self.sign_vs_top(base)?;
        if !hi.zero && !hi.neg {
            return Ok(Tri::No);
        }
        Ok(if !lo.neg && !hi.pos { Tri::Yes } else { Tri::Unknown })
    }

    pub(crate) fn require_in_iq(&self, base: &BaseEnclosure) -> Result<()> {
        match self.in_iq(base)? {
            Tri::Yes => Ok(()),
            Tri::No => Err(Error::domain("x lies outside I_q = [0, M/(q-1)]")),
            Tri::Unknown => Err(Error::PrecisionExhausted { position: 0 }),
        }
    }

    /// Certified zero. Exact points are decided; approximate ones only when degenerate.
    pub fn is_zero(&self, base: &BaseEnclosure) -> Result<bool> {
        Ok(match self {
            Point::Rat(r) => r.is_zero(),
            Point::Alg(e) => base.exact().expect("exact base").elem_sign(e)? == std::cmp::Ordering::Equal,
            Point::Approx(v) => v.as_point().is_some_and(|r| r.is_zero()),
        })
    }
}
