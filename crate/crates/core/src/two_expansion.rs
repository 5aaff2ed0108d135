//! Points with exactly two expansions: certificates, the pair search, and
//! the reduction of points with several expansions to such points.

use std::collections::{HashMap, HashSet};

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::rational::int;
use crate::arith::{BaseEnclosure, Rational, RationalInterval};
use crate::constants::{default_precision, golden_ratio_general, komornik_loreti};
use crate::error::{Error, Result};
use crate::expansion::{
    digit_options_point, enumerate_point, expand_periodic, uniqueness_certificate, DigitOptions, ExpansionMode, Point,
    UniquenessVerdict,
};
use crate::sequence::{all_sequences, DiffSeries, DigitWord, EventuallyPeriodicSeq};
use crate::transversality::{transversality_root, RootResult};

/// Digits of α(q) compared before a uniqueness verdict falls back to exact cycle detection.
pub const VERDICT_DEPTH: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct U2Checks {
    pub a_unique: UniquenessVerdict,
    pub b_unique: UniquenessVerdict,
    /// `π_q(w m a) = π_q(w (m+1) b)` certified.
    pub value_equality: bool,
    /// Enclosure of `π_q(w m a) - π_q(w (m+1) b)`.
    pub value_gap: RationalInterval,
    /// For `j = 0..|w|`: `Some(true)` if `π_q(w_{j+1} ... w_n m a)` is certifiably
    /// outside the switch region, `Some(false)` if inside, `None` if undecided.
    pub prefix_avoids_switch: Vec<Option<bool>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationCheck {
    pub depth: usize,
    pub live: usize,
    pub ambiguous: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct U2Certificate {
    pub w: DigitWord,
    pub m: u32,
    pub a: EventuallyPeriodicSeq,
    pub b: EventuallyPeriodicSeq,
    pub q: BaseEnclosure,
    pub checks: U2Checks,
    pub valid: bool,
    /// Prefix counts of the point's expansions; run only for valid certificates.
    pub enumeration: Option<EnumerationCheck>,
}

impl U2Certificate {
    /// Valid, and the enumeration shows exactly two expansions.
    pub fn confirmed(&self) -> bool {
        self.valid && self.enumeration.as_ref().is_some_and(|e| e.live == 2 && e.ambiguous == 0)
    }
}

/// The constant `C = (M/(q-1) - 1)/2`, taken at the top of the enclosure where it is smallest.
pub fn separation_constant(base: &BaseEnclosure) -> Rational {
    (int(base.m() as i64) / (base.q().hi() - int(1)) - int(1)) / int(2)
}

fn require_above_golden(base: &BaseEnclosure) -> Result<()> {
    let gr = golden_ratio_general(base.m())?;
    if base.q().lo() <= gr.q().hi() {
        return Err(Error::domain(format!("base {} is not certifiably above the generalised golden ratio", base.q())));
    }
    Ok(())
}

fn with_alphabet(s: &EventuallyPeriodicSeq, m: u32) -> Result<EventuallyPeriodicSeq> {
    if s.m() == m {
        return Ok(s.clone());
    }
    EventuallyPeriodicSeq::new(s.preperiod().to_vec(), s.period().to_vec(), m)
}

/// Checks that `π_q(w m a) = π_q(w (m+1) b)` has exactly the two expansions
/// `w m a` and `w (m+1) b`: both tails unique, equal values, and no digit
/// choice along `w`. Valid certificates are cross-checked by enumerating all
/// expansion prefixes of length `depth`.
pub fn check_u2_point(
    w: &DigitWord,
    m: u32,
    a: &EventuallyPeriodicSeq,
    b: &EventuallyPeriodicSeq,
    base: &BaseEnclosure,
    depth: usize,
) -> Result<U2Certificate> {
    let big_m = base.m();
    if m >= big_m {
        return Err(Error::domain(format!("m = {m} must be below M = {big_m}")));
    }
    let w = DigitWord::new(w.digits().to_vec(), big_m)?;
    let a = with_alphabet(a, big_m)?;
    let b = with_alphabet(b, big_m)?;
    require_above_golden(base)?;

    let a_unique = uniqueness_certificate(&a, base, VERDICT_DEPTH.max(depth))?;
    let b_unique = uniqueness_certificate(&b, base, VERDICT_DEPTH.max(depth))?;

    let mut left = w.digits().to_vec();
    left.push(m);
    let mut right = w.digits().to_vec();
    right.push(m + 1);
    let xa = Point::pi(base, &a.prepend(&left)?)?;
    let xb = Point::pi(base, &b.prepend(&right)?)?;
    let gap = xa.sub(base, &xb)?;
    let value_gap = gap.enclosure(base)?;
    let value_equality = if gap.is_exact() {
        gap.is_zero(base)?
    } else {
        let tol = separation_constant(base) * crate::arith::rational::pow(&(int(1) / base.q().lo()), depth);
        value_gap.contains_zero() && value_gap.width() < tol
    };

    let mut prefix_avoids_switch = Vec::with_capacity(w.len());
    for j in 0..w.len() {
        let y = Point::pi(base, &a.prepend(&left[j..])?)?;
        prefix_avoids_switch.push(match digit_options_point(&y, base)? {
            DigitOptions::Digits(d) => Some(d.len() == 1),
            DigitOptions::Ambiguous => None,
        });
    }
    let valid = a_unique == UniquenessVerdict::UniqueCertified
        && b_unique == UniquenessVerdict::UniqueCertified
        && value_equality
        && prefix_avoids_switch.iter().all(|p| *p == Some(true));
    let enumeration = if valid {
        let t = enumerate_point(&xa, base, depth)?;
        Some(EnumerationCheck { depth, live: t.live_count(), ambiguous: t.ambiguous_count() })
    } else {
        None
    };
    Ok(U2Certificate {
        w,
        m,
        a,
        b,
        q: base.clone(),
        checks: U2Checks { a_unique, b_unique, value_equality, value_gap, prefix_avoids_switch },
        valid,
        enumeration,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSearchRecord {
    pub a: EventuallyPeriodicSeq,
    pub b: EventuallyPeriodicSeq,
    pub diff: DiffSeries,
    pub root: RootResult,
    /// Verdicts for `a` and `b` at the root.
    pub membership: (UniquenessVerdict, UniquenessVerdict),
    /// Both members certified unique: `π_q(m a)` has exactly two expansions for every `0 ≤ m < M`.
    pub constructive: bool,
}

/// Canonical representative of `{(a, b), (reflect b, reflect a)}`; both pairs have the same
/// difference series and the same verdicts.
pub fn canonical_pair(a: &EventuallyPeriodicSeq, b: &EventuallyPeriodicSeq) -> (EventuallyPeriodicSeq, EventuallyPeriodicSeq) {
    let (ra, rb) = (b.reflect(), a.reflect());
    if (&ra, &rb) < (a, b) {
        (ra, rb)
    } else {
        (a.clone(), b.clone())
    }
}

/// Searches pairs `(a, b)` of sequences with preperiod at most `preperiod_bound`
/// and period at most `period_bound` for bases `q*` in `window` with
/// `π_{q*}(a) = π_{q*}(b) + 1`.
///
/// Sequences that are already certified non-unique at the top of the window
/// are skipped: the univoque sets grow with `q`, so they are non-unique at
/// every root inside the window as well. Of the pairs `(a, b)` and
/// `(reflect b, reflect a)` only the canonical one is kept.
pub fn construct_u2_candidates(
    m: u32,
    window: &RationalInterval,
    period_bound: usize,
    preperiod_bound: usize,
) -> Result<Vec<PairSearchRecord>> {
    let kl = komornik_loreti(m, &default_precision())?;
    if window.lo() <= kl.q().hi() || window.hi() >= &int(m as i64 + 1) {
        return Err(Error::domain(format!("window {window} is not inside (q_KL, {})", m + 1)));
    }
    let top = BaseEnclosure::rational(m, window.hi().clone())?;
    let seqs: Vec<EventuallyPeriodicSeq> = all_sequences(m, preperiod_bound, period_bound)
        .into_par_iter()
        .filter(|s| !matches!(uniqueness_certificate(s, &top, VERDICT_DEPTH), Ok(UniquenessVerdict::NotUniqueCertified { .. })))
        .collect();

    let mut by_diff: HashMap<DiffSeries, Vec<(EventuallyPeriodicSeq, EventuallyPeriodicSeq)>> = HashMap::new();
    let mut seen = HashSet::new();
    for a in &seqs {
        for b in &seqs {
            let pair = canonical_pair(a, b);
            if !seen.insert(pair.clone()) {
                continue;
            }
            let d = DiffSeries::from_pair(&pair.0, &pair.1)?;
            by_diff.entry(d).or_default().push(pair);
        }
    }
    let mut groups: Vec<(DiffSeries, Vec<_>)> = by_diff.into_iter().collect();
    groups.sort_by_cached_key(|g| g.0.to_string());

    let precision = crate::arith::rational::two_pow_neg(60);
    let found: Vec<Result<Vec<PairSearchRecord>>> = groups
        .into_par_iter()
        .map(|(diff, pairs)| {
            let root = transversality_root(&diff, window, &precision)?;
            let Some(q) = root.root() else { return Ok(Vec::new()) };
            let mut out = Vec::new();
            for (a, b) in pairs {
                let va = uniqueness_certificate(&a, q, VERDICT_DEPTH)?;
                let vb = uniqueness_certificate(&b, q, VERDICT_DEPTH)?;
                let constructive = va == UniquenessVerdict::UniqueCertified && vb == UniquenessVerdict::UniqueCertified;
                out.push(PairSearchRecord { a, b, diff: diff.clone(), root: root.clone(), membership: (va, vb), constructive });
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for f in found {
        records.extend(f?);
    }
    records.sort_by(|x, y| {
        let qx = x.root.root().expect("records carry roots").q();
        let qy = y.root.root().expect("records carry roots").q();
        qx.lo().cmp(qy.lo()).then_with(|| (&x.a, &x.b).cmp(&(&y.a, &y.b)))
    });
    Ok(records)
}

/// Image of `d ↦ max(0, 2d - 1)` over `dim ⊆ [0, 1]`.
pub fn theorem_bound(dim: &RationalInterval) -> Result<RationalInterval> {
    if dim.lo().is_negative() || dim.hi() > &int(1) {
        return Err(Error::domain(format!("dimension enclosure {dim} is not inside [0, 1]")));
    }
    let f = |d: &Rational| (int(2) * d - int(1)).max(int(0));
    Ok(RationalInterval::spanning(f(dim.lo()), f(dim.hi())))
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    /// Length of the common prefix before the bifurcation.
    pub k: usize,
    pub prefix: DigitWord,
    /// Enclosure of the tail point, which has exactly two expansions.
    pub tail: RationalInterval,
    #[serde(skip)]
    pub tail_point: Point,
}

/// Certified: `y` has an eventually periodic greedy expansion that is its only expansion.
fn certified_unique_point(y: &Point, base: &BaseEnclosure) -> Result<bool> {
    let Some(g) = expand_periodic(y, base, ExpansionMode::Greedy, base.budget().max_depth)? else {
        return Ok(false);
    };
    Ok(uniqueness_certificate(&g, base, VERDICT_DEPTH)? == UniquenessVerdict::UniqueCertified)
}

/// Finds the shortest prefix `c_1 ... c_k` of an expansion of `x` (lexicographically
/// first among those of that length) after which the remainder has exactly two
/// expansions: two admissible next digits, each followed by a unique expansion.
pub fn reduce_to_u2_point(x: &Point, base: &BaseEnclosure, depth: usize) -> Result<Option<Reduction>> {
    let tree_level = |k: usize| enumerate_point(x, base, k);
    for k in 0..=depth {
        let level = tree_level(k)?;
        for path in level.live_paths() {
            let mut y = x.clone();
            for &d in path.digits() {
                y = y.step(base, d);
            }
            let DigitOptions::Digits(ds) = digit_options_point(&y, base)? else { continue };
            if ds.len() != 2 {
                continue;
            }
            if certified_unique_point(&y.step(base, ds[0]), base)? && certified_unique_point(&y.step(base, ds[1]), base)? {
                return Ok(Some(Reduction { k, prefix: path.clone(), tail: y.enclosure(base)?, tail_point: y }));
            }
        }
    }
    Ok(None)
}

pub fn reduce_to_u2(x: &RationalInterval, base: &BaseEnclosure, depth: usize) -> Result<Option<Reduction>> {
    reduce_to_u2_point(&Point::from_interval(base, x), base, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;
    use crate::arith::{AlgebraicReal, Poly};

    fn seq(t: &str) -> EventuallyPeriodicSeq {
        EventuallyPeriodicSeq::parse(t, 1).unwrap()
    }

    fn tribonacci() -> BaseEnclosure {
        let a = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, -1, 1]), int(1), int(2)).unwrap();
        BaseEnclosure::algebraic(1, a).unwrap()
    }

    #[test]
    fn tribonacci_pair_is_not_u2() {
        let c = check_u2_point(&DigitWord::empty(1), 0, &seq("111(0)"), &seq("(0)"), &tribonacci(), 20).unwrap();
        assert!(c.checks.value_equality);
        assert!(matches!(c.checks.a_unique, UniquenessVerdict::NotUniqueCertified { .. }));
        assert!(!c.valid && c.enumeration.is_none());
        let c = check_u2_point(&DigitWord::empty(1), 0, &seq("(0)"), &seq("(0)"), &tribonacci(), 20).unwrap();
        assert!(!c.checks.value_equality && !c.valid);
    }

    #[test]
    fn theorem_bound_examples() {
        let iv = |a: i64, b: i64| RationalInterval::spanning(ratio(a, 100), ratio(b, 100));
        assert_eq!(theorem_bound(&iv(70, 70)).unwrap(), iv(40, 40));
        assert_eq!(theorem_bound(&iv(40, 40)).unwrap(), iv(0, 0));
        assert_eq!(theorem_bound(&iv(45, 55)).unwrap(), iv(0, 10));
        assert!(theorem_bound(&iv(-1, 50)).is_err());
        assert!(theorem_bound(&iv(50, 101)).is_err());
    }

    #[test]
    fn window_precondition() {
        let w = RationalInterval::spanning(ratio(162, 100), ratio(170, 100));
        assert!(construct_u2_candidates(1, &w, 2, 2).is_err());
    }

    #[test]
    fn trivial_pairs_give_nothing_inside_the_window() {
        let w = RationalInterval::spanning(ratio(180, 100), ratio(199, 100));
        let recs = construct_u2_candidates(1, &w, 1, 0).unwrap();
        assert!(recs.iter().all(|r| !r.constructive));
    }

    #[test]
    fn small_search_yields_valid_certificates() {
        let w = RationalInterval::spanning(ratio(180, 100), ratio(199, 100));
        let recs = construct_u2_candidates(1, &w, 3, 2).unwrap();
        let good: Vec<_> = recs.iter().filter(|r| r.constructive).collect();
        assert!(!good.is_empty());
        for r in good.iter().take(5) {
            let q = r.root.root().unwrap();
            let c = check_u2_point(&DigitWord::empty(1), 0, &r.a, &r.b, q, 30).unwrap();
            assert!(c.confirmed(), "{} {} at {} {:?} {:?}", r.a, r.b, q.q(), c.checks, c.enumeration);
            let red = reduce_to_u2_point(&Point::pi(q, &r.a.prepend(&[0]).unwrap()).unwrap(), q, 3).unwrap().unwrap();
            assert_eq!(red.k, 0);
        }
        assert!(reduce_to_u2(&RationalInterval::point(int(0)), good[0].root.root().unwrap(), 5).unwrap().is_none());
    }
}
