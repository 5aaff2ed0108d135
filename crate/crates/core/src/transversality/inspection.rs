//! Rigorous checks of the explicit negativity estimates used for `ω = 1/100`.

use serde::Serialize;

use crate::arith::interval::ser_rational;
use crate::arith::rational::{int, pow, ratio};
use crate::arith::{Rational, RationalInterval};
use crate::constants::{default_precision, komornik_loreti};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct InspectionCertificate {
    pub name: String,
    /// Range of `q` on which the expression is certified negative.
    pub interval: RationalInterval,
    /// Number of pieces in the final subdivision.
    pub pieces: usize,
    /// Largest upper bound over the pieces; negative.
    #[serde(serialize_with = "ser_rational")]
    pub sup_bound: Rational,
}

pub fn omega() -> Rational {
    ratio(1, 100)
}

/// A sum of terms `c / q^k` (`k ≥ 1`) plus optionally `1/(q^2 (q-1)^2)`.
struct Expr {
    terms: Vec<(Rational, usize)>,
    with_tail: bool,
}

impl Expr {
    /// Upper bound over `[a, b]` with `1 < a`: each term is monotone in `q`.
    fn upper(&self, a: &Rational, b: &Rational) -> Rational {
        let mut acc = int(0);
        for (c, k) in &self.terms {
            let at = if c < &int(0) { b } else { a };
            acc += c / pow(at, *k);
        }
        if self.with_tail {
            let t = a * (a - int(1));
            acc += int(1) / (&t * &t);
        }
        acc
    }
}

fn certify(name: &str, e: &Expr, lo: Rational, hi: Rational, max_pieces: usize) -> Result<InspectionCertificate> {
    let mut stack = vec![(lo.clone(), hi.clone())];
    let mut pieces = 0;
    let mut sup: Option<Rational> = None;
    while let Some((a, b)) = stack.pop() {
        let u = e.upper(&a, &b);
        if u < int(0) {
            pieces += 1;
            sup = Some(sup.map_or(u.clone(), |s: Rational| s.max(u)));
            continue;
        }
        if pieces + stack.len() >= max_pieces {
            return Err(Error::CertificationFailure(format!("{name}: could not certify negativity on [{a}, {b}]")));
        }
        let mid = (&a + &b) / int(2);
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    Ok(InspectionCertificate {
        name: name.into(),
        interval: RationalInterval::spanning(lo, hi),
        pieces,
        sup_bound: sup.expect("at least one piece"),
    })
}

/// Certifies the negativity estimates for alphabet size `m`.
///
/// For `M = 1` the two bounds on `(q_KL, 2)` are checked on the closed
/// `[lo(q_KL), 2]`. For `M ≥ 2`, `-1 + 2ω + p/(p-1)^2 < 0` for every
/// `3 ≤ p ≤ M`, and for `M ∈ {2, 3}` also `-1 + 2ω + 2/(q-1)^2 < 0` on
/// `[2.43, M+1]` together with `q_KL > 2.43`.
pub fn verify_inspection_inequalities(m: u32) -> Result<Vec<InspectionCertificate>> {
    if m == 0 {
        return Err(Error::domain("alphabet size M must be positive"));
    }
    let w = -int(1) + int(2) * omega();
    let max_pieces = 1 << 16;
    let mut out = Vec::new();
    if m == 1 {
        let kl = komornik_loreti(1, &default_precision())?;
        let lo = kl.q().lo().clone();
        let case_a = Expr { terms: vec![(w.clone(), 2), (int(-2), 4), (int(-2), 5)], with_tail: true };
        let case_b = Expr { terms: vec![(w.clone(), 2), (int(-2), 4), (int(-6), 6)], with_tail: true };
        out.push(certify("case 1a", &case_a, lo.clone(), int(2), max_pieces)?);
        out.push(certify("case 1b", &case_b, lo, int(2), max_pieces)?);
        return Ok(out);
    }
    for p in 3..=m as i64 {
        let v = &w + ratio(p, (p - 1) * (p - 1));
        if v >= int(0) {
            return Err(Error::CertificationFailure(format!("p = {p}: bound is not negative")));
        }
        out.push(InspectionCertificate {
            name: format!("p = {p}"),
            interval: RationalInterval::spanning(int(p), int(m as i64 + 1)),
            pieces: 1,
            sup_bound: v,
        });
    }
    if m <= 3 {
        let start = ratio(243, 100);
        let kl = komornik_loreti(m, &default_precision())?;
        if kl.q().lo() <= &start {
            return Err(Error::CertificationFailure(format!("q_KL({m}) > 2.43 not certified")));
        }
        // -1 + 2ω + 2/(q-1)^2 decreases in q
        let gap = &start - int(1);
        let v = &w + int(2) / (&gap * &gap);
        if v >= int(0) {
            return Err(Error::CertificationFailure("p = 2: bound is not negative at 2.43".into()));
        }
        out.push(InspectionCertificate {
            name: "p = 2".into(),
            interval: RationalInterval::spanning(start, int(m as i64 + 1)),
            pieces: 1,
            sup_bound: v,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_cases() {
        let c = verify_inspection_inequalities(1).unwrap();
        assert_eq!(c.len(), 2);
        for cert in &c {
            assert!(cert.sup_bound < int(0));
            assert!(cert.interval.lo() < &ratio(1788, 1000) && cert.interval.hi() == &int(2));
        }
    }

    #[test]
    fn larger_alphabets() {
        for m in 2..=6 {
            let c = verify_inspection_inequalities(m).unwrap();
            assert_eq!(c.iter().any(|c| c.name == "p = 2"), m <= 3);
        }
    }

    #[test]
    fn p2_bound_is_tight_near_243() {
        // at 2.42 the p = 2 bound is already positive
        let g = ratio(142, 100);
        assert!(-int(1) + int(2) * omega() + int(2) / (&g * &g) > int(0));
    }
}
