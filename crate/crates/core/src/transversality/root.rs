//! The unique root of `1 + Σ d_i q^{-i}` for `q ∈ [q_KL, M+1]`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::star::verify_star;
use crate::arith::rational::int;
use crate::arith::{pi_rational_function, series_value, AlgebraicReal, BaseEnclosure, Rational, RationalInterval};
use crate::constants::{default_precision, komornik_loreti};
use crate::error::{Error, Result};
use crate::sequence::DiffSeries;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result")]
pub enum RootResult {
    NoRootCertified,
    UniqueRoot { q: BaseEnclosure },
    Inconclusive { reason: String },
}

impl RootResult {
    pub fn root(&self) -> Option<&BaseEnclosure> {
        match self {
            RootResult::UniqueRoot { q } => Some(q),
            _ => None,
        }
    }
}

/// `g(1/q) = 1 + Σ d_i q^{-i}` at a rational base.
pub fn g_at_base(diff: &DiffSeries, q: &Rational) -> Rational {
    int(1) + series_value(diff.preperiod(), diff.period(), &(Rational::one() / q))
}

/// Finds the zero of `q ↦ 1 + Σ d_i q^{-i}` in `search ⊆ [lo(q_KL), M+1]`.
///
/// The series is δ-transversal on `x = 1/q ∈ [0, x_M]`: wherever it drops
/// below δ it strictly decreases. So its sign at the two ends of the search
/// interval decides everything: positive at both ends or negative at the
/// small-`x` end means no zero, a sign change means exactly one, which is
/// then located by exact bisection and returned as an algebraic number.
pub fn transversality_root(diff: &DiffSeries, search: &RationalInterval, precision: &Rational) -> Result<RootResult> {
    if !precision.is_positive() {
        return Err(Error::domain("precision must be positive"));
    }
    let m = diff.m();
    let kl = komornik_loreti(m, &default_precision())?;
    if search.lo() < kl.q().lo() || search.hi() > &int(m as i64 + 1) {
        return Err(Error::domain(format!("search interval {search} is not inside [q_KL, {}]", m + 1)));
    }
    verify_star(m)?;
    let at_small_x = g_at_base(diff, search.hi());
    let at_large_x = g_at_base(diff, search.lo());
    let exact = |q: &Rational| BaseEnclosure::rational(m, q.clone()).map(|q| RootResult::UniqueRoot { q });
    if at_small_x.is_zero() {
        return exact(search.hi());
    }
    if at_large_x.is_zero() {
        return exact(search.lo());
    }
    if at_small_x.is_negative() {
        if at_large_x.is_positive() {
            return Ok(RootResult::Inconclusive { reason: "sign pattern contradicts transversality".into() });
        }
        return Ok(RootResult::NoRootCertified);
    }
    if at_large_x.is_positive() {
        return Ok(RootResult::NoRootCertified);
    }
    // g > 0 at q = hi, g < 0 at q = lo
    let (mut lo, mut hi) = (search.lo().clone(), search.hi().clone());
    let target = precision.clone().min(crate::arith::rational::two_pow_neg(40));
    while &hi - &lo > target {
        let mid = (&lo + &hi) / int(2);
        let v = g_at_base(diff, &mid);
        if v.is_zero() {
            return exact(&mid);
        }
        if v.is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // q^p (q^r - 1) g(1/q) is a polynomial with the same zeros for q > 1
    let (num, den) = pi_rational_function(diff.preperiod(), diff.period());
    let a = AlgebraicReal::isolate(&den.add(&num), lo, hi)?;
    let q = BaseEnclosure::algebraic(m, a)?.tightened(precision);
    Ok(RootResult::UniqueRoot { q })
}
