//! Exhaustive enumeration of expansion prefixes.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

use super::point::{Point, Tri};
use crate::arith::{BaseEnclosure, RationalInterval};
use crate::error::{Error, Result};
use crate::sequence::DigitWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeStatus {
    Live,
    Dead,
    Ambiguous,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreePath {
    pub digits: DigitWord,
    pub status: NodeStatus,
    #[serde(skip)]
    pub remainder: RationalInterval,
}

/// All length-`depth` digit paths whose remainders stay in `I_q`; paths that
/// certainly leave it are pruned.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionTree {
    pub x: RationalInterval,
    pub q: RationalInterval,
    pub depth: usize,
    pub paths: Vec<TreePath>,
    #[serde(skip)]
    pub nodes: usize,
}

impl ExpansionTree {
    pub fn live_count(&self) -> usize {
        self.paths.iter().filter(|p| p.status == NodeStatus::Live).count()
    }

    pub fn ambiguous_count(&self) -> usize {
        self.paths.iter().filter(|p| p.status == NodeStatus::Ambiguous).count()
    }

    /// Certified bounds on the number of distinct length-`depth` prefixes of expansions.
    pub fn count_bounds(&self) -> (usize, usize) {
        (self.live_count(), self.live_count() + self.ambiguous_count())
    }

    pub fn live_paths(&self) -> impl Iterator<Item = &DigitWord> {
        self.paths.iter().filter(|p| p.status == NodeStatus::Live).map(|p| &p.digits)
    }
}

struct Walk<'a> {
    base: &'a BaseEnclosure,
    depth: usize,
    nodes: &'a AtomicUsize,
}

impl Walk<'_> {
    fn visit(&self, r: Point, path: &mut Vec<u32>, ambiguous: bool, out: &mut Vec<TreePath>) -> Result<()> {
        if self.nodes.fetch_add(1, AtomicOrdering::Relaxed) >= self.base.budget().max_nodes {
            return Err(Error::Budget(format!("more than {} tree nodes", self.base.budget().max_nodes)));
        }
        if path.len() == self.depth {
            out.push(TreePath {
                digits: DigitWord::from_raw(path.clone(), self.base.m()),
                status: if ambiguous { NodeStatus::Ambiguous } else { NodeStatus::Live },
                remainder: r.enclosure(self.base)?,
            });
            return Ok(());
        }
        for d in 0..=self.base.m() {
            let child = r.step(self.base, d);
            let amb = match child.in_iq(self.base)? {
                Tri::No => continue,
                Tri::Yes => ambiguous,
                Tri::Unknown => true,
            };
            path.push(d);
            self.visit(child, path, amb, out)?;
            path.pop();
        }
        Ok(())
    }
}

/// Enumerates every digit path of length `depth` from the point `x`.
///
/// A `Live` path is the prefix of a genuine expansion; an `Ambiguous` path
/// could not be decided with the available enclosures. Every expansion of
/// `x` has its prefix among the returned paths.
pub fn enumerate_point(x: &Point, base: &BaseEnclosure, depth: usize) -> Result<ExpansionTree> {
    let root_amb = match x.in_iq(base)? {
        Tri::No => return Err(Error::domain("x lies outside I_q = [0, M/(q-1)]")),
        Tri::Yes => false,
        Tri::Unknown => true,
    };
    let nodes = AtomicUsize::new(0);
    let walk = Walk { base, depth, nodes: &nodes };
    let mut paths = Vec::new();
    if depth == 0 {
        walk.visit(x.clone(), &mut Vec::new(), root_amb, &mut paths)?;
    } else {
        nodes.fetch_add(1, AtomicOrdering::Relaxed);
        // first-level subtrees are independent
        let parts: Vec<Result<Vec<TreePath>>> = (0..=base.m())
            .into_par_iter()
            .map(|d| {
                let child = x.step(base, d);
                let amb = match child.in_iq(base)? {
                    Tri::No => return Ok(Vec::new()),
                    Tri::Yes => root_amb,
                    Tri::Unknown => true,
                };
                let mut out = Vec::new();
                walk.visit(child, &mut vec![d], amb, &mut out)?;
                Ok(out)
            })
            .collect();
        for p in parts {
            paths.extend(p?);
        }
    }
    paths.sort_by(|a, b| a.digits.digits().cmp(b.digits.digits()));
    Ok(ExpansionTree { x: x.enclosure(base)?, q: base.q().clone(), depth, paths, nodes: nodes.into_inner() })
}

pub fn enumerate_expansions(x: &RationalInterval, base: &BaseEnclosure, depth: usize) -> Result<ExpansionTree> {
    enumerate_point(&Point::from_interval(base, x), base, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, ratio};
    use crate::arith::{AlgebraicReal, Poly, RefinementBudget};

    #[test]
    fn enumeration_examples() {
        let b2 = BaseEnclosure::rational(1, int(2)).unwrap();
        let t = enumerate_expansions(&RationalInterval::point(int(0)), &b2, 5).unwrap();
        assert_eq!(t.count_bounds(), (1, 1));
        let t = enumerate_expansions(&RationalInterval::point(ratio(1, 2)), &b2, 6).unwrap();
        let live: Vec<String> = t.live_paths().map(|w| w.to_string()).collect();
        assert_eq!(live, vec!["011111", "100000"]);
    }

    #[test]
    fn golden_ratio_count_matches_word_scan() {
        let a = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, 1]), int(1), int(2)).unwrap();
        let phi = BaseEnclosure::algebraic(1, a).unwrap();
        let t = enumerate_expansions(&RationalInterval::point(int(1)), &phi, 12).unwrap();
        // independent scan of all 4096 words in Z[φ]: the remainder a + bφ of a word
        // must stay in [0, φ]
        fn sign(a: i64, b: i64) -> i64 {
            // sign of a + bφ = (2a + b + b√5) / 2
            let (u, v) = (2 * a + b, b);
            match (u.signum(), v.signum()) {
                (s, t) if s == t || t == 0 => s,
                (0, t) => t,
                (s, _) => s * (u * u - 5 * v * v).signum(),
            }
        }
        let mut count = 0;
        for bits in 0u32..4096 {
            let (mut a, mut b) = (1i64, 0i64);
            let mut ok = true;
            for k in (0..12).rev() {
                let d = ((bits >> k) & 1) as i64;
                (a, b) = (b - d, a + b);
                ok &= sign(a, b) >= 0 && sign(-a, 1 - b) >= 0;
            }
            if ok {
                count += 1;
            }
        }
        assert_eq!(t.live_count(), count);
        assert_eq!(t.ambiguous_count(), 0);
    }

    #[test]
    fn interval_base_reports_ambiguity() {
        let b = BaseEnclosure::interval(1, RationalInterval::spanning(ratio(17, 10), ratio(18, 10))).unwrap();
        let t = enumerate_expansions(&RationalInterval::point(int(1)), &b, 8).unwrap();
        assert!(t.ambiguous_count() > 0);
        let (lo, hi) = t.count_bounds();
        assert!(lo <= hi);
    }

    #[test]
    fn node_budget_is_enforced() {
        let b = BaseEnclosure::rational(1, ratio(11, 10))
            .unwrap()
            .with_budget(RefinementBudget { max_nodes: 100, ..Default::default() });
        let r = enumerate_expansions(&RationalInterval::point(int(1)), &b, 20);
        assert!(matches!(r, Err(Error::Budget(_))));
    }
}
