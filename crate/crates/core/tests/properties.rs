use num_traits::{Signed, Zero};
use proptest::prelude::*;
use std::cmp::Ordering;

use univoque::arith::rational::{int, pow, ratio};
use univoque::constants::{golden_ratio_general, komornik_loreti};
use univoque::expansion::{greedy_expansion, quasi_greedy_expansion, switch_region, uniqueness_certificate, UniquenessVerdict};
use univoque::sequence::all_sequences;
use univoque::transversality::{g_at_base, transversality_root};
use univoque::two_expansion::theorem_bound;
use univoque::{eval_pi, BaseEnclosure, DiffSeries, EventuallyPeriodicSeq, Rational, RationalInterval};

fn kl(m: u32) -> BaseEnclosure {
    komornik_loreti(m, &ratio(1, 1_000_000_000_000)).unwrap()
}

/// Rational `q = lo + t (hi - lo)` with `t = k / 1000`, strictly inside `(lo, hi)`.
fn between(lo: &Rational, hi: &Rational, k: u32) -> Rational {
    lo + (hi - lo) * ratio(k as i64, 1000)
}

fn unique_at(base: &BaseEnclosure, s: &EventuallyPeriodicSeq) -> bool {
    uniqueness_certificate(s, base, 64).unwrap() == UniquenessVerdict::UniqueCertified
}

/// 1-based index of the first differing digit.
fn first_difference(s: &EventuallyPeriodicSeq, t: &EventuallyPeriodicSeq) -> usize {
    (0..).find(|&i| s.at(i) != t.at(i)).unwrap() + 1
}

fn arb_diff(m: u32) -> impl Strategy<Value = DiffSeries> {
    let d = -(m as i64)..=(m as i64);
    (prop::collection::vec(d.clone(), 0..4), prop::collection::vec(d, 1..4))
        .prop_map(move |(pre, per)| DiffSeries::new(pre, per, m).unwrap())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

#[test]
fn constants_are_ordered_and_increase_with_m() {
    let mut prev: Option<BaseEnclosure> = None;
    for m in 1..=8 {
        let gr = golden_ratio_general(m).unwrap();
        let k = kl(m);
        assert!(gr.q().hi() < k.q().lo(), "M={m}");
        assert!(k.q().hi() < &int(m as i64 + 1), "M={m}");
        if let Some(p) = prev {
            assert!(p.q().hi() < k.q().lo(), "M={m}");
        }
        prev = Some(k);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn blocks_are_disjoint_above_the_golden_ratio(m in 1u32..6, k in 1u32..1000) {
        let gr = golden_ratio_general(m).unwrap();
        let q = between(gr.q().hi(), &int(m as i64 + 1), k);
        let base = BaseEnclosure::rational(m, q).unwrap();
        prop_assert!(switch_region(&base).disjoint());
    }

    #[test]
    fn inflated_blocks_stay_disjoint_above_kl(m in 2u32..6, k in 0u32..1000) {
        let c = kl(m);
        let (lo, hi) = (c.q().lo().clone(), c.q().hi().clone());
        // Smallest value of the gap over the KL enclosure, divided by three.
        let delta = (int(2) * &lo - int(2) - int(m as i64)) / (&hi * &hi - &lo) / int(3);
        prop_assert!(delta.is_positive());
        let q = between(&hi, &int(m as i64 + 1), k);
        let base = BaseEnclosure::rational(m, q).unwrap();
        prop_assert!(switch_region(&base).separated_by(&delta));
    }

    #[test]
    fn quasi_greedy_never_exceeds_greedy(num in 1i64..1000, k in 1u32..1000) {
        let q = between(&ratio(3, 2), &int(2), k);
        let base = BaseEnclosure::rational(1, q.clone()).unwrap();
        // x ∈ (0, 1/(q-1)]
        let x = RationalInterval::point(ratio(num, 1000) / (&q - int(1)));
        let g = greedy_expansion(&x, &base, 24).unwrap();
        let qg = quasi_greedy_expansion(&x, &base, 24).unwrap();
        prop_assert!(qg.digits() <= g.digits());
    }

    #[test]
    fn theorem_bound_is_monotone_and_two_lipschitz(a in 0i64..=1000, b in 0i64..=1000) {
        let (x, y) = (ratio(a.min(b), 1000), ratio(a.max(b), 1000));
        let fx = theorem_bound(&RationalInterval::point(x.clone())).unwrap();
        let fy = theorem_bound(&RationalInterval::point(y.clone())).unwrap();
        let both = theorem_bound(&RationalInterval::spanning(x.clone(), y.clone())).unwrap();
        prop_assert!(fx.lo() <= fy.lo());
        prop_assert!(fy.lo() - fx.lo() <= int(2) * (&y - &x));
        prop_assert!(fx.is_subset_of(&both) && fy.is_subset_of(&both));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn root_agrees_with_sign_scan(diff in arb_diff(1), split in 1u32..1000) {
        let k = kl(1);
        let search = RationalInterval::spanning(k.q().hi().clone(), int(2));
        let r = transversality_root(&diff, &search, &ratio(1, 1_000_000)).unwrap();
        let grid: Vec<Rational> = (0..=64).map(|i| between(search.lo(), search.hi(), i * 1000 / 64)).collect();
        match r.root() {
            Some(q) => {
                for p in &grid {
                    let g = g_at_base(&diff, p);
                    if p < q.q().lo() {
                        prop_assert!(!g.is_positive(), "g({p}) = {g} below the root");
                    } else if p > q.q().hi() {
                        prop_assert!(g.is_positive(), "g({p}) = {g} above the root");
                    }
                }
                // Splitting the window finds the same root on exactly one side.
                let mid = between(search.lo(), search.hi(), split);
                let left = transversality_root(&diff, &RationalInterval::spanning(search.lo().clone(), mid.clone()), &ratio(1, 1_000_000)).unwrap();
                let right = transversality_root(&diff, &RationalInterval::spanning(mid, search.hi().clone()), &ratio(1, 1_000_000)).unwrap();
                let found: Vec<_> = [left.root(), right.root()].into_iter().flatten().collect();
                prop_assert!(!found.is_empty() && found.len() <= 2);
                for f in found {
                    prop_assert!(f.q().intersects(q.q()));
                }
            }
            None => {
                let signs: Vec<bool> = grid.iter().map(|p| g_at_base(&diff, p).is_positive()).collect();
                prop_assert!(signs.iter().all(|&s| s == signs[0]) || g_at_base(&diff, &grid[0]).is_zero());
            }
        }
    }
}

/// Distinct unique expansions are ordered like their values and kept apart by
/// `C q^{-d}`, `d` the first differing index, `C = (M/(q-1) - 1) / 2`.
#[test]
fn unique_expansions_are_separated_and_ordered() {
    let mut pairs = 0usize;
    let bases: [(u32, [(i64, i64); 4]); 2] = [(1, [(9, 5), (15, 8), (19, 10), (39, 20)]), (2, [(13, 5), (27, 10), (14, 5), (29, 10)])];
    for (m, qs) in bases {
        let c = kl(m);
        let pool = all_sequences(m, 2, 4);
        for (n, d) in qs {
            let q = ratio(n, d);
            assert!(c.q().hi() < &q);
            let base = BaseEnclosure::rational(m, q.clone()).unwrap();
            let sep = (int(m as i64) / (&q - int(1)) - int(1)) / int(2);
            let unique: Vec<_> = pool.iter().filter(|s| unique_at(&base, s)).collect();
            let values: Vec<RationalInterval> = unique.iter().map(|s| eval_pi(&base, s, 64).unwrap()).collect();
            for i in 0..unique.len() {
                for j in i + 1..unique.len() {
                    let d = first_difference(unique[i], unique[j]);
                    let gap = values[j].sub(&values[i]);
                    let bound = &sep / pow(&q, d);
                    match unique[i].lex_compare(unique[j]).unwrap() {
                        Ordering::Less => assert!(gap.lo() > &bound, "{} {} at q={q}", unique[i], unique[j]),
                        Ordering::Greater => assert!(-gap.hi() > bound, "{} {} at q={q}", unique[i], unique[j]),
                        Ordering::Equal => unreachable!("pool is canonical"),
                    }
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs >= 10_000, "only {pairs} pairs");
}
