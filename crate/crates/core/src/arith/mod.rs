//! Exact rational arithmetic, intervals, real algebraic numbers and the
//! certified evaluation of digit series.

pub mod algebraic;
pub mod interval;
pub mod log;
pub mod poly;
pub mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use algebraic::{AlgebraicReal, FieldElem};
pub use interval::RationalInterval;
pub use poly::Poly;
pub use rational::Rational;

use crate::error::{Error, Result};
use crate::sequence::{DiffSeries, EventuallyPeriodicSeq};
use rational::{int, ratio};

/// Caps on the work spent before a computation gives up with an
/// inconclusive answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementBudget {
    /// Remainder steps tried when hunting for a cycle in an exact expansion.
    pub max_depth: usize,
    /// Nodes visited by an expansion tree enumeration.
    pub max_nodes: usize,
    /// Interval subdivisions in adaptive sign certification.
    pub max_splits: usize,
}

impl Default for RefinementBudget {
    fn default() -> Self {
        RefinementBudget { max_depth: 512, max_nodes: 2_000_000, max_splits: 1 << 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SignResult {
    Positive,
    Negative,
    /// The enclosure of the value straddles zero; carries its width.
    ContainsZero(#[serde(serialize_with = "interval::ser_rational")] Rational),
}

/// Digits of α(q) found so far, shared between clones of one base.
#[derive(Default, Debug)]
pub(crate) struct AlphaCache {
    pub digits: Vec<u32>,
    /// Set once α(q) is known to be eventually periodic.
    pub periodic: Option<EventuallyPeriodicSeq>,
    pub periodic_checked: bool,
    /// Position at which the next digit could not be certified.
    pub stuck_at: Option<usize>,
}

/// A base `q ∈ (1, M+1]` over the alphabet `{0, ..., M}`: an interval
/// enclosure, optionally backed by the exact algebraic number.
#[derive(Clone)]
pub struct BaseEnclosure {
    m: u32,
    q: RationalInterval,
    exact: Option<AlgebraicReal>,
    budget: RefinementBudget,
    pub(crate) alpha: Arc<Mutex<AlphaCache>>,
}

impl BaseEnclosure {
    fn build(m: u32, q: RationalInterval, exact: Option<AlgebraicReal>) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("alphabet size M must be positive"));
        }
        if q.lo() <= &int(1) || q.hi() > &int(m as i64 + 1) {
            return Err(Error::domain(format!("base {q} is not inside (1, {}]", m + 1)));
        }
        Ok(BaseEnclosure { m, q, exact, budget: RefinementBudget::default(), alpha: Default::default() })
    }

    pub fn rational(m: u32, q: Rational) -> Result<Self> {
        let a = AlgebraicReal::from_rational(q.clone());
        Self::build(m, RationalInterval::point(q), Some(a))
    }

    /// An algebraic base; the enclosure is refined to about `2^-64`.
    pub fn algebraic(m: u32, q: AlgebraicReal) -> Result<Self> {
        if let Some(r) = q.as_rational() {
            return Self::rational(m, r);
        }
        let top = int(m as i64 + 1);
        if q.cmp_rational(&int(1))? != Ordering::Greater || q.cmp_rational(&top)? == Ordering::Greater {
            return Err(Error::domain(format!("base {q:?} is not inside (1, {}]", m + 1)));
        }
        if let Some(r) = q.as_rational() {
            return Self::rational(m, r);
        }
        let e = q.refine_to(&ratio(1, 1 << 62));
        let (lo, hi) = e.into_bounds();
        // the root is strictly inside (1, M+1] and not equal to an endpoint
        let lo = if lo <= int(1) { q.enclosure().lo().clone().max(int(1) + ratio(1, 1 << 62)) } else { lo };
        let hi = if hi > top { top } else { hi };
        Self::build(m, RationalInterval::spanning(lo, hi), Some(q))
    }

    /// A base known only through an enclosure.
    pub fn interval(m: u32, q: RationalInterval) -> Result<Self> {
        if let Some(r) = q.as_point() {
            return Self::rational(m, r.clone());
        }
        Self::build(m, q, None)
    }

    /// Shrinks the enclosure of an exact algebraic base to width at most `width`.
    pub fn tightened(mut self, width: &Rational) -> Self {
        if self.exact.is_some() && self.q.width() > *width {
            self.q = self.refined(width);
        }
        self
    }

    pub fn with_budget(mut self, budget: RefinementBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> &RationalInterval {
        &self.q
    }

    pub fn exact(&self) -> Option<&AlgebraicReal> {
        self.exact.as_ref()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.q.as_point()
    }

    pub fn budget(&self) -> RefinementBudget {
        self.budget
    }

    /// Enclosure of the right end `M/(q-1)` of the interval `I_q`.
    pub fn i_q_hi(&self) -> RationalInterval {
        let m = int(self.m as i64);
        RationalInterval::spanning(&m / (self.q.hi() - int(1)), &m / (self.q.lo() - int(1)))
    }

    /// Tightest available enclosure of `q`, refining an exact algebraic base to `width`.
    pub fn refined(&self, width: &Rational) -> RationalInterval {
        match &self.exact {
            Some(a) if !self.q.is_point() => {
                let e = a.refine_to(width);
                let top = int(self.m as i64 + 1);
                let hi = if e.hi() > &top { top } else { e.hi().clone() };
                RationalInterval::spanning(e.lo().clone().max(self.q.lo().clone()), hi)
            }
            _ => self.q.clone(),
        }
    }
}

impl fmt::Debug for BaseEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseEnclosure(M={}, q={}", self.m, self.q)?;
        if let Some(a) = self.exact.as_ref().filter(|_| !self.q.is_point()) {
            write!(f, ", {a:?}")?;
        }
        write!(f, ")")
    }
}

impl PartialEq for BaseEnclosure {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.q == other.q
    }
}

impl Serialize for BaseEnclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BaseEnclosure", 3)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field("q", &self.q)?;
        let poly = self
            .exact
            .as_ref()
            .filter(|_| !self.q.is_point())
            .map(|a| a.poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
        st.serialize_field("poly", &poly)?;
        st.end()
    }
}

/// `N` with `Σ_{i=1}^{k} c_i x^i = u N / v^k` for `x = u/v`; integer Horner, no gcds.
fn horner_numerator(c: &[i64], u: &BigInt, v: &BigInt) -> BigInt {
    let mut n = BigInt::zero();
    let mut vp = BigInt::one();
    for &ci in c.iter().rev() {
        n = BigInt::from(ci) * &vp + u * n;
        vp *= v;
    }
    n
}

/// `Σ_{i≥1} c_i x^i` in closed form for the eventually periodic coefficients
/// `pre per per ...` and `0 ≤ x < 1`.
pub fn series_value(pre: &[i64], per: &[i64], x: &Rational) -> Rational {
    let (u, v) = (x.numer(), x.denom());
    let p = pre.len();
    let r = per.len();
    let vp = num_traits::pow(v.clone(), p);
    let up = num_traits::pow(u.clone(), p);
    let gap = num_traits::pow(v.clone(), r) - num_traits::pow(u.clone(), r);
    let head = u * horner_numerator(pre, u, v);
    let cyc = u * horner_numerator(per, u, v);
    // head / v^p + u^p cyc / (v^p (v^r - u^r))
    Rational::new(head * &gap + up * cyc, vp * gap)
}

/// `π_q` as a rational function `num(q)/den(q)` with `den = q^p (q^r - 1)`.
pub fn pi_rational_function(pre: &[i64], per: &[i64]) -> (Poly, Poly) {
    let p = pre.len();
    let r = per.len();
    let qr1 = Poly::monomial(r, int(1)).sub(&Poly::one());
    let mut head = Poly::zero();
    for (i, &c) in pre.iter().enumerate() {
        head = head.add(&Poly::monomial(p - 1 - i, int(c)));
    }
    let mut tail = Poly::zero();
    for (j, &e) in per.iter().enumerate() {
        tail = tail.add(&Poly::monomial(r - 1 - j, int(e)));
    }
    (qr1.mul(&head).add(&tail), qr1.shift_up(p))
}

pub fn digits_i64(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&d| d as i64).collect()
}

/// `π_q(s)` as an exact element of `Q(q)`; requires an exact base.
pub fn pi_exact(base: &BaseEnclosure, s: &EventuallyPeriodicSeq) -> Option<FieldElem> {
    let q = base.exact()?;
    if let Some(r) = base.as_rational() {
        let x = Rational::one() / r;
        return Some(FieldElem::rational(series_value(&digits_i64(s.preperiod()), &digits_i64(s.period()), &x)));
    }
    let (num, den) = pi_rational_function(&digits_i64(s.preperiod()), &digits_i64(s.period()));
    Some(FieldElem::from_parts(q, num, den))
}

fn check_seq(base: &BaseEnclosure, s: &EventuallyPeriodicSeq) -> Result<()> {
    if s.m() > base.m() {
        for i in 0..s.distinct_tail_count() {
            if s.at(i) > base.m() {
                return Err(Error::DigitRange { digit: s.at(i) as i64, position: i + 1, max: base.m() });
            }
        }
    }
    Ok(())
}

/// Enclosure of `π_q(s) = Σ s_i q^{-i}` over every `q` in the base enclosure.
///
/// The value is evaluated in closed form at both endpoints of the enclosure;
/// it is decreasing in `q`, so no truncation is involved and `depth` only
/// has to be positive.
pub fn eval_pi(base: &BaseEnclosure, s: &EventuallyPeriodicSeq, depth: usize) -> Result<RationalInterval> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    check_seq(base, s)?;
    let pre = digits_i64(s.preperiod());
    let per = digits_i64(s.period());
    let at = |q: &Rational| series_value(&pre, &per, &(Rational::one() / q));
    let q = base.q();
    if let Some(r) = q.as_point() {
        return Ok(RationalInterval::point(at(r)));
    }
    Ok(RationalInterval::spanning(at(q.hi()), at(q.lo())))
}

/// Enclosure of `g(x) = 1 + Σ d_i x^i` over `x ⊂ (0, 1)`.
pub fn eval_diff(diff: &DiffSeries, x: &RationalInterval) -> Result<RationalInterval> {
    if !x.lo().is_positive() || x.hi() >= &int(1) {
        return Err(Error::domain(format!("x = {x} is not inside (0, 1)")));
    }
    if let Some(p) = x.as_point() {
        return Ok(RationalInterval::point(int(1) + series_value(diff.preperiod(), diff.period(), p)));
    }
    // both parts have nonnegative coefficients, hence increase with x
    let (pp, pq, np, nq) = diff.split();
    let lo = int(1) + series_value(&pp, &pq, x.lo()) - series_value(&np, &nq, x.hi());
    let hi = int(1) + series_value(&pp, &pq, x.hi()) - series_value(&np, &nq, x.lo());
    Ok(RationalInterval::spanning(lo, hi))
}

/// Certified sign of `g` over the whole of `x`.
pub fn certified_sign(diff: &DiffSeries, x: &RationalInterval, depth: usize) -> Result<SignResult> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let v = eval_diff(diff, x)?;
    Ok(if v.lo().is_positive() {
        SignResult::Positive
    } else if v.hi().is_negative() {
        SignResult::Negative
    } else {
        SignResult::ContainsZero(v.width())
    })
}
