//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::interval::RationalInterval;
use super::rational::Rational;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(r: Rational) -> Self {
        Self::new(vec![r])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly { c: vec![Rational::zero(), Rational::one()] }
    }

    pub fn monomial(k: usize, coeff: Rational) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = coeff;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn constant_term(&self) -> Rational {
        self.c.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.c.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z) - o.c.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.c[dd].recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &lead_inv;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dc;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        match (self.degree(), d.degree()) {
            (Some(a), Some(b)) if a < b => self.clone(),
            (None, _) => Poly::zero(),
            _ => self.div_rem(d).1,
        }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interval Horner scheme; sound for any interval argument.
    pub fn eval_interval(&self, x: &RationalInterval) -> RationalInterval {
        if let Some(p) = x.as_point() {
            return RationalInterval::point(self.eval(p));
        }
        let mut acc = RationalInterval::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }

    /// `x^n p(1/x)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = vec![Rational::zero(); n + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[n - i] = x.clone();
        }
        Poly::new(c)
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        let seq = self.sturm_sequence();
        let v = |x: &Rational| sign_changes(seq.iter().map(|p| p.eval(x)));
        v(lo).saturating_sub(v(hi))
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        seq
    }
}

fn sign_changes(vals: impl Iterator<Item = Rational>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for v in vals {
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(&[-1, -1, -1, 1]);
        let b = Poly::from_ints(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = Poly::from_ints(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree(), Poly::from_ints(&[-2, 1, 1]));
        let g = Poly::gcd(&p, &Poly::from_ints(&[-1, 1]));
        assert_eq!(g, Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        // x^3 - x^2 - x - 1 has a single real root near 1.839
        let t = Poly::from_ints(&[-1, -1, -1, 1]);
        assert_eq!(t.count_roots(&int(1), &int(2)), 1);
        assert_eq!(t.count_roots(&int(-5), &int(1)), 0);
        // x^2 - 2
        let p = Poly::from_ints(&[-2, 0, 1]);
        assert_eq!(p.count_roots(&int(-2), &int(2)), 2);
        assert_eq!(p.count_roots(&ratio(3, 2), &int(2)), 0);
    }

    #[test]
    fn interval_eval_contains_point_values() {
        let t = Poly::from_ints(&[-1, -1, -1, 1]);
        let iv = RationalInterval::spanning(ratio(9, 5), ratio(19, 10));
        let v = t.eval_interval(&iv);
        for k in 0..=10 {
            let x = ratio(180 + k, 100);
            assert!(v.contains(&t.eval(&x)));
        }
    }

    #[test]
    fn reversal() {
        // 1 - x - x^2 - x^3 -> x^3 - x^2 - x - 1
        let g = Poly::from_ints(&[1, -1, -1, -1]);
        assert_eq!(g.reversed(3), Poly::from_ints(&[-1, -1, -1, 1]));
    }
}
