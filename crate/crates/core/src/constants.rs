//! Distinguished bases: α(q), the base with a given α, the Komornik-Loreti
//! constant, the generalised golden ratio, and a bounded check for the set V.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::rational::{int, ratio};
use crate::arith::{digits_i64, pi_rational_function, series_value, AlgebraicReal, BaseEnclosure, Poly, Rational, RationalInterval};
use crate::error::{Error, Result};
use crate::expansion::alpha_prefix;
use crate::sequence::{kl_sequence, DigitWord, EventuallyPeriodicSeq};

/// Width used for constants when the caller does not ask for another one.
pub fn default_precision() -> Rational {
    ratio(1, 1_000_000_000_000)
}

/// First `n` digits of α(q), the quasi-greedy expansion of 1.
pub fn alpha_of_q(base: &BaseEnclosure, n: usize) -> Result<DigitWord> {
    alpha_prefix(base, n)
}

fn check_precision(p: &Rational) -> Result<()> {
    if p <= &Rational::zero() {
        return Err(Error::domain("precision must be positive"));
    }
    Ok(())
}

/// The base `q` with `π_q(s) = 1`, exact as an algebraic number and enclosed
/// to width `precision`. `s` must be infinite and self-admissible.
pub fn q_from_alpha(s: &EventuallyPeriodicSeq, precision: &Rational) -> Result<BaseEnclosure> {
    check_precision(precision)?;
    s.self_admissible().map_err(|index| Error::Admissibility { index })?;
    if s.is_finite() {
        return Err(Error::domain(format!("{s} ends in 0^∞; α(q) is always infinite")));
    }
    let m = s.m();
    let pre = digits_i64(s.preperiod());
    let per = digits_i64(s.period());
    let pi = |q: &Rational| series_value(&pre, &per, &(Rational::one() / q));
    let top = int(m as i64 + 1);
    let at_top = pi(&top);
    if at_top > Rational::one() {
        return Err(Error::domain(format!("π_(M+1)({s}) > 1: no base in (1, M+1]")));
    }
    if at_top.is_one() {
        return BaseEnclosure::rational(m, top);
    }
    // π_q(s) grows without bound as q decreases to 1
    let mut lo = None;
    for k in 1..=256u32 {
        let q = int(1) + crate::arith::rational::two_pow_neg(k);
        if pi(&q) > Rational::one() {
            lo = Some(q);
            break;
        }
    }
    let lo = lo.ok_or_else(|| Error::domain("could not bracket the base from below"))?;
    let (num, den) = pi_rational_function(&pre, &per);
    let a = AlgebraicReal::isolate(&den.sub(&num), lo, top)?;
    Ok(BaseEnclosure::algebraic(m, a)?.tightened(precision))
}

type KlMemo = RwLock<HashMap<(u32, Rational), RationalInterval>>;

fn kl_memo() -> &'static KlMemo {
    static MEMO: OnceLock<KlMemo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `π_q(w 0^∞)` and `π_q(w M^∞)` for the first `n` Komornik-Loreti digits.
fn kl_brackets(m: u32, w: &DigitWord, q: &Rational) -> (Rational, Rational) {
    let x = Rational::one() / q;
    let d = digits_i64(w.digits());
    (series_value(&d, &[0], &x), series_value(&d, &[m as i64], &x))
}

/// Enclosure of the Komornik-Loreti constant `q_KL(M)` of width at most `precision`.
///
/// Dyadic bisection of `[1, M+1]`. A midpoint is placed below `q_KL` when
/// `π(w 0^∞) > 1` and above when `π(w M^∞) < 1`, where `w` is a prefix of
/// α(q_KL); the digitwise bounds `w 0^∞ ≤ α(q_KL) ≤ w M^∞` make both tests
/// sound, and the prefix is lengthened until one of them fires. The bisection
/// path does not depend on `precision`, so enclosures nest as it shrinks.
pub fn komornik_loreti(m: u32, precision: &Rational) -> Result<BaseEnclosure> {
    check_precision(precision)?;
    if m == 0 {
        return Err(Error::domain("alphabet size M must be positive"));
    }
    let key = (m, precision.clone());
    if let Some(q) = kl_memo().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return BaseEnclosure::interval(m, q.clone());
    }
    let mut lo = int(1);
    let mut hi = int(m as i64 + 1);
    let mut n = 16;
    let mut w = kl_sequence(m, n);
    while &(&hi - &lo) > precision || lo.is_one() {
        let mid = (&lo + &hi) / int(2);
        loop {
            let (low, high) = kl_brackets(m, &w, &mid);
            if low > Rational::one() {
                lo = mid;
                break;
            }
            if high < Rational::one() {
                hi = mid;
                break;
            }
            // q_KL is transcendental, so a long enough prefix always decides
            n *= 2;
            w = kl_sequence(m, n);
        }
    }
    let q = RationalInterval::spanning(lo, hi);
    kl_memo().write().unwrap_or_else(|e| e.into_inner()).insert(key, q.clone());
    BaseEnclosure::interval(m, q)
}

/// Generalised golden ratio: `k+1` for `M = 2k`, and the root of
/// `q^2 - (k+1) q - (k+1)` for `M = 2k+1`.
pub fn golden_ratio_general(m: u32) -> Result<BaseEnclosure> {
    if m == 0 {
        return Err(Error::domain("alphabet size M must be positive"));
    }
    let k = (m / 2) as i64;
    if m.is_multiple_of(2) {
        return BaseEnclosure::rational(m, int(k + 1));
    }
    let p = Poly::from_ints(&[-(k + 1), -(k + 1), 1]);
    let a = AlgebraicReal::isolate(&p, int(k + 1), int(k + 2))?;
    Ok(BaseEnclosure::algebraic(m, a)?.tightened(&default_precision()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "report", content = "index")]
pub enum VMembershipReport {
    ViolatedAtIndex(usize),
    ConsistentToDepth(usize),
}

/// Looks for an index `i ≤ depth` where `reflect(α) ⪯ α_{i+1} α_{i+2} ... ⪯ α`
/// certifiably fails on the first `depth - i` digits.
pub fn v_membership_check(base: &BaseEnclosure, depth: usize) -> Result<VMembershipReport> {
    let alpha = alpha_prefix(base, depth)?;
    let a = alpha.digits();
    let refl = alpha.reflect();
    let r = refl.digits();
    for i in 0..depth {
        let tail = &a[i..];
        let len = tail.len();
        if tail > &a[..len] || tail < &r[..len] {
            return Ok(VMembershipReport::ViolatedAtIndex(i));
        }
    }
    Ok(VMembershipReport::ConsistentToDepth(depth))
}
