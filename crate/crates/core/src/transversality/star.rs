//! The auxiliary power series `h` and points `x_M` that certify transversality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::interval::ser_rational;
use crate::arith::rational::{int, ratio};
use crate::arith::{AlgebraicReal, Poly, Rational, RationalInterval};
use crate::constants::{default_precision, komornik_loreti};
use crate::error::{Error, Result};

/// `h(x) = 1 + Σ_{i=1}^{L} head_i x^i + tail · Σ_{i>L} x^i`.
#[derive(Clone, Debug, Serialize)]
pub struct StarFunctionSpec {
    pub m: u32,
    pub k: u32,
    #[serde(serialize_with = "ser_rationals")]
    pub head: Vec<Rational>,
    pub tail: i64,
    #[serde(skip)]
    pub x_m: AlgebraicReal,
    /// Human-readable form of `h`.
    pub formula: String,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

fn quadratic_root(a: i64, b: i64, c: i64) -> AlgebraicReal {
    // the positive root of a x^2 + b x + c with a > 0 > c lies in (0, 1) here
    AlgebraicReal::isolate(&Poly::from_ints(&[c, b, a]), int(0), int(1)).expect("one root in (0, 1)")
}

/// The case table: `h` and `x_M` by parity of `M` and size of `k`.
pub fn star_function(m: u32) -> Result<StarFunctionSpec> {
    if m == 0 {
        return Err(Error::domain("alphabet size M must be positive"));
    }
    let k = m / 2;
    let ki = k as i64;
    let half = ratio(1, 2);
    let (head, tail, formula) = if m == 1 {
        (vec![int(-1), int(-1), int(-1), half], 1, "1 - x - x^2 - x^3 + 1/2 x^4 + Σ_{i≥5} x^i".to_string())
    } else if m % 2 == 1 && k == 1 {
        (vec![int(-3), -half], 3, "1 - 3x - 1/2 x^2 + 3 Σ_{i≥3} x^i".to_string())
    } else if m % 2 == 1 {
        (vec![int(-(ki + 3))], 2 * ki + 1, format!("1 - {}x + {} Σ_{{i≥2}} x^i", ki + 3, 2 * ki + 1))
    } else if k == 1 {
        (vec![int(-2), -half], 2, "1 - 2x - 1/2 x^2 + 2 Σ_{i≥3} x^i".to_string())
    } else {
        (vec![int(-(ki + 2))], 2 * ki, format!("1 - {}x + {} Σ_{{i≥2}} x^i", ki + 2, 2 * ki))
    };
    let x_m = if m == 1 {
        // 2^{-2/3}: the real root of 4x^3 - 1
        AlgebraicReal::isolate(&Poly::from_ints(&[-1, 0, 0, 4]), int(0), int(1)).expect("one root")
    } else if k >= 3 {
        AlgebraicReal::from_rational(ratio(1, ki + 1))
    } else if m % 2 == 1 {
        quadratic_root(ki + 1, ki + 1, -1)
    } else {
        quadratic_root(ki, ki + 1, -1)
    };
    Ok(StarFunctionSpec { m, k, head, tail, x_m, formula })
}

impl StarFunctionSpec {
    /// `(1 - x) h(x)`, a polynomial.
    pub fn h_times_gap(&self) -> Poly {
        let l = self.head.len();
        let mut body = Poly::one();
        for (i, c) in self.head.iter().enumerate() {
            body = body.add(&Poly::monomial(i + 1, c.clone()));
        }
        body.mul(&Poly::from_ints(&[1, -1])).add(&Poly::monomial(l + 1, int(self.tail)))
    }

    /// `(1 - x)^2 h'(x)`, a polynomial.
    pub fn dh_times_gap2(&self) -> Poly {
        let l = self.head.len();
        let mut body = Poly::zero();
        for (i, c) in self.head.iter().enumerate() {
            body = body.add(&Poly::monomial(i, c * int(i as i64 + 1)));
        }
        // d/dx x^{L+1}/(1-x) = x^L ((L+1) - L x) / (1-x)^2
        let tail = Poly::new(vec![int(l as i64 + 1), int(-(l as i64))]).shift_up(l).scale(&int(self.tail));
        body.mul(&Poly::from_ints(&[1, -2, 1])).add(&tail)
    }

    /// `h(x)` for rational `0 ≤ x < 1`.
    pub fn h(&self, x: &Rational) -> Rational {
        self.h_times_gap().eval(x) / (Rational::one() - x)
    }

    pub fn dh(&self, x: &Rational) -> Rational {
        let g = Rational::one() - x;
        self.dh_times_gap2().eval(x) / (&g * &g)
    }
}

/// Proof object for δ-transversality on `[0, x_M] ⊇ [1/(M+1), 1/q_KL]`.
#[derive(Clone, Debug, Serialize)]
pub struct TransversalityCertificate {
    pub m: u32,
    /// `[1/(M+1), 1/lo(q_KL)]`, inside `[0, x_M]`.
    pub interval: RationalInterval,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    pub x_m: RationalInterval,
    pub h_value: RationalInterval,
    pub h_deriv: RationalInterval,
    pub kl: RationalInterval,
}

/// Certifies `h(x_M) > 0`, `h'(x_M) < 0` and `1/q_KL ≤ x_M`, and derives
/// `δ = min(h(x_M)/2, |h'(x_M)|/2)`. At irrational `x_M` the lower ends of the
/// enclosures of `h(x_M)` and `|h'(x_M)|` are used, which gives a smaller,
/// still valid δ.
pub fn verify_star(m: u32) -> Result<TransversalityCertificate> {
    type Memo = RwLock<HashMap<u32, TransversalityCertificate>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(c) = memo.read().unwrap_or_else(|e| e.into_inner()).get(&m) {
        return Ok(c.clone());
    }
    let c = build_certificate(m)?;
    memo.write().unwrap_or_else(|e| e.into_inner()).insert(m, c.clone());
    Ok(c)
}

fn build_certificate(m: u32) -> Result<TransversalityCertificate> {
    let spec = star_function(m)?;
    let x = &spec.x_m;
    let fail = |what: &str| Error::CertificationFailure(format!("M={m}: {what}"));
    if x.sign_of(&spec.h_times_gap())? != Ordering::Greater {
        return Err(fail("h(x_M) is not positive"));
    }
    if x.sign_of(&spec.dh_times_gap2())? != Ordering::Less {
        return Err(fail("h'(x_M) is not negative"));
    }
    let (h_value, h_deriv, x_m) = match x.as_rational() {
        Some(r) => (RationalInterval::point(spec.h(&r)), RationalInterval::point(spec.dh(&r)), RationalInterval::point(r)),
        None => {
            let xe = x.refine_to(&ratio(1, 1_000_000_000_000_000));
            let gap = RationalInterval::point(int(1)).sub(&xe);
            let hv = spec.h_times_gap().eval_interval(&xe).div(&gap)?;
            let hd = spec.dh_times_gap2().eval_interval(&xe).div(&gap.mul(&gap))?;
            (hv, hd, xe)
        }
    };
    if !h_value.lo().is_positive() || !h_deriv.hi().is_negative() {
        return Err(fail("enclosures of h(x_M), h'(x_M) too wide"));
    }
    let delta = (h_value.lo().clone() / int(2)).min(-h_deriv.hi().clone() / int(2));
    let kl = komornik_loreti(m, &default_precision())?.q().clone();
    let right = Rational::one() / kl.lo();
    if x.cmp_rational(&right)? == Ordering::Less {
        return Err(fail("1/q_KL exceeds x_M"));
    }
    Ok(TransversalityCertificate {
        m,
        interval: RationalInterval::spanning(ratio(1, m as i64 + 1), right),
        delta,
        x_m,
        h_value,
        h_deriv,
        kl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let s = star_function(1).unwrap();
        assert_eq!(s.head, vec![int(-1), int(-1), int(-1), ratio(1, 2)]);
        assert_eq!(s.tail, 1);
        // x_M^3 = 1/4
        assert_eq!(s.x_m.sign_of(&Poly::from_ints(&[-1, 0, 0, 4])).unwrap(), Ordering::Equal);
        let s = star_function(7).unwrap();
        assert_eq!((s.head.clone(), s.tail), (vec![int(-6)], 7));
        assert_eq!(s.x_m.as_rational(), Some(ratio(1, 4)));
        let s = star_function(6).unwrap();
        assert_eq!((s.head.clone(), s.tail), (vec![int(-5)], 6));
        assert_eq!(s.x_m.as_rational(), Some(ratio(1, 4)));
    }

    #[test]
    fn closed_forms_match_series() {
        for m in 1..=9 {
            let s = star_function(m).unwrap();
            let x = ratio(2, 5);
            let mut direct = int(1);
            let mut deriv = int(0);
            for i in 1..400usize {
                let c = s.head.get(i - 1).cloned().unwrap_or(int(s.tail));
                direct += &c * crate::arith::rational::pow(&x, i);
                deriv += &c * int(i as i64) * crate::arith::rational::pow(&x, i - 1);
            }
            let eps = ratio(1, 1_000_000_000_000);
            assert!((s.h(&x) - direct).abs() < eps);
            assert!((s.dh(&x) - deriv).abs() < eps);
        }
    }

    #[test]
    fn certificates_for_k_three() {
        let c = verify_star(7).unwrap();
        assert_eq!(c.h_value, RationalInterval::point(ratio(1, 12)));
        assert_eq!(c.h_deriv, RationalInterval::point(ratio(-5, 9)));
        assert_eq!(c.delta, ratio(1, 24));
        let c = verify_star(6).unwrap();
        assert_eq!(c.h_value, RationalInterval::point(ratio(1, 4)));
        assert_eq!(c.h_deriv, RationalInterval::point(ratio(-1, 3)));
        assert_eq!(c.delta, ratio(1, 8));
        let c = verify_star(1).unwrap();
        assert!(c.delta.is_positive());
        assert!(c.x_m.width() < ratio(1, 1_000_000_000_000));
    }
}
