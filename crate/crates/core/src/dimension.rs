//! Two-sided bounds on dim_H U_q from automata of admissible words.
//!
//! A word is read left to right. Every digit `c_j < M` opens a comparison of
//! the following digits against α(q), every digit `c_j > 0` one of the
//! reflected digits. A comparison is a violation as soon as it goes above α,
//! and resolved once it goes below. The state of the reader is the set of
//! comparisons still tied, which gives a finite automaton once ties are cut
//! off after `L` digits.
//!
//! The upper automaton compares against α(q_hi) and lets ties of length `L`
//! pass; it accepts every prefix of every sequence in U_q. The lower
//! automaton compares against α(q_lo) and rejects ties of length `L`; each
//! of its infinite paths is a unique expansion for every q in the enclosure.
//! Dimensions are entropies divided by `ln q`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::log::ln;
use crate::arith::rational::{int, round_dyadic};
use crate::arith::{BaseEnclosure, Rational, RationalInterval};
use crate::constants::{default_precision, komornik_loreti};
use crate::error::{Error, Result};
use crate::expansion::alpha_info;
use crate::two_expansion::theorem_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TieState {
    /// Lengths of the tied comparisons against α.
    pub direct: Vec<u16>,
    /// Lengths of the tied comparisons of reflected digits against α.
    pub reflected: Vec<u16>,
}

#[derive(Clone, Debug)]
pub struct WordAutomaton {
    pub m: u32,
    pub l: usize,
    pub side: Side,
    pub alpha: Vec<u32>,
    pub states: Vec<TieState>,
    /// `edges[i]` lists `(digit, target)`.
    pub edges: Vec<Vec<(u32, usize)>>,
}

fn advance(ties: &[u16], d: u32, alpha: &[u32], l: usize, side: Side, out: &mut Vec<u16>) -> bool {
    for &k in ties {
        let a = alpha[k as usize];
        if d > a {
            return false;
        }
        if d == a {
            if k as usize + 1 < l {
                out.push(k + 1);
            } else if side == Side::Lower {
                return false;
            }
        }
    }
    true
}

fn transition(s: &TieState, d: u32, alpha: &[u32], m: u32, l: usize, side: Side) -> Option<TieState> {
    let mut direct = Vec::with_capacity(s.direct.len() + 1);
    let mut reflected = Vec::with_capacity(s.reflected.len() + 1);
    if !advance(&s.direct, d, alpha, l, side, &mut direct) || !advance(&s.reflected, m - d, alpha, l, side, &mut reflected) {
        return None;
    }
    if d < m {
        direct.push(0);
    }
    if d > 0 {
        reflected.push(0);
    }
    direct.sort_unstable();
    direct.dedup();
    reflected.sort_unstable();
    reflected.dedup();
    Some(TieState { direct, reflected })
}

impl WordAutomaton {
    /// Reachable part of the automaton; the lower one is trimmed to states
    /// with an infinite future. State 0 is the initial state when it survives.
    pub fn build(m: u32, alpha: &[u32], l: usize, side: Side, max_states: usize) -> Result<Self> {
        if l == 0 || alpha.len() < l {
            return Err(Error::domain("comparison window needs L >= 1 digits of alpha"));
        }
        let start = TieState { direct: Vec::new(), reflected: Vec::new() };
        let mut index = HashMap::from([(start.clone(), 0usize)]);
        let mut states = vec![start];
        let mut edges: Vec<Vec<(u32, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for d in 0..=m {
                let Some(t) = transition(&states[i], d, alpha, m, l, side) else { continue };
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= max_states {
                            return Err(Error::Budget(format!("automaton exceeds {max_states} states")));
                        }
                        let j = states.len();
                        index.insert(t.clone(), j);
                        states.push(t);
                        edges.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                edges[i].push((d, j));
            }
        }
        let mut a = WordAutomaton { m, l, side, alpha: alpha[..l].to_vec(), states, edges };
        if side == Side::Lower {
            a.trim();
        }
        Ok(a)
    }

    fn trim(&mut self) {
        let n = self.states.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if alive[i] && !self.edges[i].iter().any(|&(_, j)| alive[j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if alive[i] {
                remap[i] = next;
                next += 1;
            }
        }
        let states = (0..n).filter(|&i| alive[i]).map(|i| self.states[i].clone()).collect();
        let edges = (0..n)
            .filter(|&i| alive[i])
            .map(|i| self.edges[i].iter().filter(|&&(_, j)| alive[j]).map(|&(d, j)| (d, remap[j])).collect())
            .collect();
        self.states = states;
        self.edges = edges;
    }

    /// The initial state, unless trimming removed it.
    pub fn initial(&self) -> Option<usize> {
        self.states.first().filter(|s| s.direct.is_empty() && s.reflected.is_empty()).map(|_| 0)
    }

    /// Number of words of each length `0..=n` read from the initial state.
    pub fn word_counts(&self, n: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(n + 1);
        let Some(s0) = self.initial() else {
            return vec![BigUint::zero(); n + 1];
        };
        let mut v = vec![BigUint::zero(); self.states.len()];
        v[s0] = BigUint::one();
        out.push(BigUint::one());
        for _ in 0..n {
            let mut w = vec![BigUint::zero(); self.states.len()];
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(_, j) in &self.edges[i] {
                    w[j] += c;
                }
            }
            out.push(w.iter().sum());
            v = w;
        }
        out
    }

    /// Strongly connected components carrying at least one cycle.
    pub fn cyclic_components(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.states.len()).map(|_| g.add_node(())).collect();
        for (i, es) in self.edges.iter().enumerate() {
            for &(_, j) in es {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .filter(|c| c.len() > 1 || self.edges[c[0]].iter().any(|&(_, j)| j == c[0]))
            .collect();
        comps.sort();
        comps
    }

    /// For `k = 1..=n`, bounds on the spectral radius of `B`, the adjacency
    /// matrix restricted to `comp`, as `(lower, upper)`: the extreme row sums
    /// of `B^k` give `ρ^k` bounds, and the extreme ratios `(B^k 1)_i / (B^{k-1} 1)_i`
    /// give `ρ` bounds directly (Collatz–Wielandt, the vector being positive).
    fn component_radius_bounds(&self, comp: &[usize], n: usize) -> Vec<[(Rational, usize); 2]> {
        let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(p, &s)| (s, p)).collect();
        let local: Vec<Vec<usize>> = comp
            .iter()
            .map(|&s| self.edges[s].iter().filter_map(|&(_, j)| pos.get(&j).copied()).collect())
            .collect();
        let mut v = vec![BigUint::one(); comp.len()];
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let w: Vec<BigUint> = local.iter().map(|row| row.iter().map(|&j| &v[j]).sum()).collect();
            let ratios: Vec<Rational> = w.iter().zip(&v).map(|(a, b)| Rational::new(a.clone().into(), b.clone().into())).collect();
            let rmin = ratios.iter().min().expect("non-empty component").clone();
            let rmax = ratios.iter().max().expect("non-empty component").clone();
            let smin = big(w.iter().min().expect("non-empty component"));
            let smax = big(w.iter().max().expect("non-empty component"));
            // compare k-th roots: a^(1/k) vs r  <=>  a vs r^k; keep the tighter as (value, root)
            let lower = if k == 1 || rmin.clone().pow(k as i32) >= smin { (rmin, 1) } else { (smin, k) };
            let upper = if k == 1 || rmax.clone().pow(k as i32) <= smax { (rmax, 1) } else { (smax, k) };
            out.push([lower, upper]);
            v = w;
        }
        out
    }
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_rat<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::arith::interval::ser_rational(v, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordCountResult {
    pub n: usize,
    #[serde(rename = "lowerCount", serialize_with = "ser_big")]
    pub lower_count: BigUint,
    #[serde(rename = "upperCount", serialize_with = "ser_big")]
    pub upper_count: BigUint,
    #[serde(rename = "L")]
    pub l: usize,
}

/// Certified α digits bracketing α(q) over the whole enclosure: `(below, above)`.
pub fn alpha_brackets(base: &BaseEnclosure, l: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    let info = alpha_info(base, l)?;
    if info.digits.len() >= l {
        let d = info.digits[..l].to_vec();
        return Ok((d.clone(), d));
    }
    // α is increasing in q: bracket by the α of the rational endpoints
    let m = base.m();
    let lo = BaseEnclosure::rational(m, base.q().lo().clone())?;
    let below = crate::expansion::alpha_prefix(&lo, l)?.digits().to_vec();
    let above = if base.q().hi() == &int(m as i64 + 1) {
        vec![m; l]
    } else {
        let hi = BaseEnclosure::rational(m, base.q().hi().clone())?;
        crate::expansion::alpha_prefix(&hi, l)?.digits().to_vec()
    };
    Ok((below, above))
}

pub fn automata(base: &BaseEnclosure, l: usize) -> Result<(WordAutomaton, WordAutomaton)> {
    let (below, above) = alpha_brackets(base, l)?;
    let cap = base.budget().max_nodes;
    let upper = WordAutomaton::build(base.m(), &above, l, Side::Upper, cap)?;
    let lower = WordAutomaton::build(base.m(), &below, l, Side::Lower, cap)?;
    Ok((lower, upper))
}

/// `upperCount` counts words with no certified violation within the window;
/// `lowerCount` counts words extending to an infinite word all of whose
/// comparisons resolve strictly within `L` digits.
pub fn admissible_word_count(base: &BaseEnclosure, n: usize, l: usize) -> Result<WordCountResult> {
    let (lower, upper) = automata(base, l)?;
    let lower_count = lower.word_counts(n).pop().expect("n+1 counts");
    let upper_count = upper.word_counts(n).pop().expect("n+1 counts");
    Ok(WordCountResult { n, lower_count, upper_count, l })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionEnclosure {
    pub q: BaseEnclosure,
    #[serde(serialize_with = "ser_rat")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub hi: Rational,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
}

impl DimensionEnclosure {
    pub fn interval(&self) -> RationalInterval {
        RationalInterval::spanning(self.lo.clone(), self.hi.clone())
    }
}

/// Lengths used for the entropy bounds at `n`: `⌊n/2^j⌋` and powers of two up to `n`.
/// The set for `2n` contains the set for `n`, so the upper bound never grows along doubling.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = std::iter::successors(Some(n), |k| (*k > 1).then_some(k / 2)).collect();
    ks.extend(std::iter::successors(Some(1usize), |k| k.checked_mul(2)).take_while(|k| *k <= n));
    ks.retain(|k| *k > 0);
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn big(v: &BigUint) -> Rational {
    Rational::from_integer(v.clone().into())
}

const OUT_BITS: u32 = 64;

/// Enclosure of dim_H U_q from the automata with window `L`, using lengths up to `n`.
pub fn dim_u_q(base: &BaseEnclosure, n: usize, l: usize) -> Result<DimensionEnclosure> {
    if n == 0 {
        return Err(Error::domain("word length n must be positive"));
    }
    let (lower, upper) = automata(base, l)?;
    let ks = checkpoints(n);
    let ln_q_lo = ln(base.q().lo())?.lo().clone();
    let ln_q_hi = ln(base.q().hi())?.hi().clone();
    let one = int(1);

    // entropy upper bound: min of the word-count bound and the largest component bound
    let counts = upper.word_counts(n);
    let mut h_hi: Option<Rational> = None;
    for &k in &ks {
        let c = ln(&big(&counts[k]))?.hi().clone() / int(k as i64);
        h_hi = Some(h_hi.map_or(c.clone(), |h| h.min(c)));
    }
    let mut spectral = Rational::zero();
    for comp in upper.cyclic_components() {
        let bounds = upper.component_radius_bounds(&comp, n);
        let mut best: Option<Rational> = None;
        for &k in &ks {
            let (v, root) = &bounds[k - 1][1];
            let c = ln(v)?.hi().clone() / int(*root as i64);
            best = Some(best.map_or(c.clone(), |b| b.min(c)));
        }
        spectral = spectral.max(best.expect("checkpoints are non-empty"));
    }
    let h_hi = h_hi.expect("checkpoints are non-empty").min(spectral);
    let hi = round_dyadic(&(h_hi / &ln_q_lo), OUT_BITS, true).min(one.clone());

    // entropy lower bound from the components of the lower automaton
    let mut h_lo = Rational::zero();
    for comp in lower.cyclic_components() {
        let bounds = lower.component_radius_bounds(&comp, n);
        for &k in &ks {
            let (v, root) = &bounds[k - 1][0];
            let c = ln(v)?.lo().clone() / int(*root as i64);
            h_lo = h_lo.max(c);
        }
    }
    let lo = round_dyadic(&(h_lo / &ln_q_hi), OUT_BITS, false).max(Rational::zero()).min(hi.clone());
    Ok(DimensionEnclosure { q: base.clone(), lo, hi, n, l })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InO {
    Yes,
    No,
    Undetermined,
}

impl InO {
    pub fn of(dim: &DimensionEnclosure) -> InO {
        let half = crate::arith::rational::ratio(1, 2);
        if dim.hi < half {
            InO::Yes
        } else if dim.lo >= half {
            InO::No
        } else {
            InO::Undetermined
        }
    }
}

impl std::fmt::Display for InO {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InO::Yes => "Yes",
            InO::No => "No",
            InO::Undetermined => "Undetermined",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub q: RationalInterval,
    pub dimension: Option<DimensionEnclosure>,
    pub bound: Option<RationalInterval>,
    #[serde(rename = "inO")]
    pub in_o: InO,
    pub error: Option<String>,
}

fn scan_one(base: &BaseEnclosure, n: usize, l: usize) -> ScanRecord {
    let q = base.q().clone();
    match dim_u_q(base, n, l).and_then(|d| Ok((theorem_bound(&d.interval())?, d))) {
        Ok((bound, d)) => ScanRecord { q, in_o: InO::of(&d), dimension: Some(d), bound: Some(bound), error: None },
        Err(e) => ScanRecord { q, dimension: None, bound: None, in_o: InO::Undetermined, error: Some(e.to_string()) },
    }
}

/// One record per grid point, in grid order. Every point must lie certifiably in `(q_KL, M+1)`.
pub fn scan_dimension(m: u32, grid: &[BaseEnclosure], n: usize, l: usize) -> Result<Vec<ScanRecord>> {
    let kl = komornik_loreti(m, &default_precision())?;
    for b in grid {
        if b.m() != m {
            return Err(Error::domain(format!("grid base has M = {}, expected {m}", b.m())));
        }
        if b.q().lo() <= kl.q().hi() || b.q().hi() >= &int(m as i64 + 1) {
            return Err(Error::domain(format!("grid point {} is not inside (q_KL, {})", b.q(), m + 1)));
        }
    }
    Ok(grid.par_iter().map(|b| scan_one(b, n, l)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;
    use crate::arith::{AlgebraicReal, Poly};
    use crate::expansion::{uniqueness_certificate, UniquenessVerdict};
    use crate::sequence::EventuallyPeriodicSeq;

    fn rat(m: u32, a: i64, b: i64) -> BaseEnclosure {
        BaseEnclosure::rational(m, ratio(a, b)).unwrap()
    }

    /// Upper count by checking every word directly.
    fn brute_upper(m: u32, alpha: &[u32], n: usize, l: usize) -> u64 {
        let total = (m as u64 + 1).pow(n as u32);
        let mut count = 0;
        for code in 0..total {
            let mut w = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                w.push((c % (m as u64 + 1)) as u32);
                c /= m as u64 + 1;
            }
            let ok = (0..n).all(|j| {
                let tail = &w[j + 1..];
                let len = tail.len().min(l);
                let direct: Vec<u32> = tail[..len].to_vec();
                let refl: Vec<u32> = tail[..len].iter().map(|d| m - d).collect();
                (w[j] == m || direct.as_slice() <= &alpha[..len]) && (w[j] == 0 || refl.as_slice() <= &alpha[..len])
            });
            count += ok as u64;
        }
        count
    }

    #[test]
    fn full_base_counts_everything() {
        let c = admissible_word_count(&rat(1, 2, 1), 10, 12).unwrap();
        assert_eq!(c.upper_count, BigUint::from(1024u32));
        assert_eq!(c.lower_count, c.upper_count);
    }

    #[test]
    fn upper_count_matches_direct_check() {
        for (m, a, b, n, l) in [(1, 3, 2, 10, 16), (1, 7, 4, 10, 6), (1, 9, 5, 11, 8), (2, 5, 2, 7, 5), (2, 27, 10, 7, 4)] {
            let base = rat(m, a, b);
            let (_, above) = alpha_brackets(&base, l).unwrap();
            let c = admissible_word_count(&base, n, l).unwrap();
            assert_eq!(c.upper_count, BigUint::from(brute_upper(m, &above, n, l)), "M={m} q={a}/{b}");
            assert!(c.lower_count <= c.upper_count);
        }
    }

    #[test]
    fn larger_window_never_adds_words() {
        let base = rat(1, 9, 5);
        let mut prev: Option<BigUint> = None;
        for l in [2, 4, 8, 16] {
            let c = admissible_word_count(&base, 16, l).unwrap().upper_count;
            if let Some(p) = &prev {
                assert!(&c <= p);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn below_kl_the_upper_bound_vanishes() {
        let d = dim_u_q(&rat(1, 7, 4), 40, 40).unwrap();
        assert!(d.hi <= ratio(1, 10), "{}", d.hi);
        assert!(d.lo.is_zero());
    }

    #[test]
    fn at_full_base_the_lower_bound_is_large() {
        let d = dim_u_q(&rat(1, 2, 1), 40, 40).unwrap();
        assert_eq!(d.hi, int(1));
        assert!(d.lo >= ratio(9, 10), "{}", d.lo);
    }

    #[test]
    fn tribonacci_has_positive_dimension() {
        let a = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, -1, 1]), int(1), int(2)).unwrap();
        let base = BaseEnclosure::algebraic(1, a).unwrap();
        let d = dim_u_q(&base, 32, 32).unwrap();
        assert!(d.lo > Rational::zero() && d.lo <= d.hi && d.hi < int(1), "{} {}", d.lo, d.hi);
    }

    #[test]
    fn upper_bound_non_increasing_along_doubling() {
        let base = rat(1, 19, 10);
        let mut prev = int(2);
        for n in [4, 8, 16, 32] {
            let d = dim_u_q(&base, n, 24).unwrap();
            assert!(d.hi <= prev);
            prev = d.hi;
        }
    }

    #[test]
    fn lower_cycles_are_unique_expansions() {
        let base = rat(1, 19, 10);
        let (lower, _) = automata(&base, 12).unwrap();
        let comp = lower.cyclic_components().into_iter().max_by_key(|c| c.len()).unwrap();
        // path from the start to the component, then a cycle inside it
        let target = comp[0];
        let mut prev = vec![None; lower.states.len()];
        let mut queue = VecDeque::from([0usize]);
        let mut seen = vec![false; lower.states.len()];
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &(d, j) in &lower.edges[i] {
                if !seen[j] {
                    seen[j] = true;
                    prev[j] = Some((i, d));
                    queue.push_back(j);
                }
            }
        }
        let mut pre = Vec::new();
        let mut cur = target;
        while let Some((i, d)) = prev[cur] {
            pre.push(d);
            cur = i;
        }
        pre.reverse();
        let in_comp: std::collections::HashSet<usize> = comp.iter().copied().collect();
        let mut walks = 0;
        for first in lower.edges[target].iter().filter(|(_, j)| in_comp.contains(j)) {
            // shortest return to the target
            let mut back = vec![None; lower.states.len()];
            let mut queue = VecDeque::from([first.1]);
            let mut seen = vec![false; lower.states.len()];
            seen[first.1] = true;
            while let Some(i) = queue.pop_front() {
                for &(d, j) in &lower.edges[i] {
                    if in_comp.contains(&j) && !seen[j] {
                        seen[j] = true;
                        back[j] = Some((i, d));
                        queue.push_back(j);
                    }
                }
            }
            let mut path = Vec::new();
            let mut cur = target;
            while cur != first.1 {
                let (i, d) = back[cur].unwrap();
                path.push(d);
                cur = i;
            }
            path.push(first.0);
            path.reverse();
            let cycle = path;
            let s = EventuallyPeriodicSeq::new(pre.clone(), cycle, 1).unwrap();
            assert_eq!(uniqueness_certificate(&s, &base, 64).unwrap(), UniquenessVerdict::UniqueCertified, "{s}");
            walks += 1;
        }
        assert!(walks > 0);
    }

    #[test]
    fn scan_records_and_domain() {
        let grid: Vec<_> = [181, 190, 199].iter().map(|&k| rat(1, k, 100)).collect();
        let recs = scan_dimension(1, &grid, 12, 12).unwrap();
        assert_eq!(recs.len(), 3);
        for r in &recs {
            let d = r.dimension.as_ref().unwrap();
            assert_eq!(r.bound.as_ref().unwrap(), &theorem_bound(&d.interval()).unwrap());
            assert!(r.in_o != InO::Yes || d.hi < ratio(1, 2));
        }
        assert!(scan_dimension(1, &[rat(1, 7, 4)], 12, 12).is_err());
    }

    #[test]
    fn checkpoint_sets_nest() {
        for n in 1..200 {
            let a = checkpoints(n);
            let b = checkpoints(2 * n);
            assert!(a.iter().all(|k| b.contains(k)), "{n}");
        }
    }
}
