//! Certified uniqueness of an expansion via comparison of its tails with α(q).

use std::cmp::Ordering;

use serde::Serialize;

use super::digits::{alpha_info, alpha_periodic, AlphaInfo};
use crate::arith::BaseEnclosure;
use crate::error::{Error, Result};
use crate::sequence::EventuallyPeriodicSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum UniquenessVerdict {
    UniqueCertified,
    /// Another expansion branches off at digit `witness` (1-based).
    NotUniqueCertified { witness: usize },
    UnknownToDepth { depth: usize },
}

enum Cmp {
    Decided(Ordering),
    Undecided,
    Stuck(usize),
}

fn compare_with_alpha(t: &EventuallyPeriodicSeq, alpha: &AlphaInfo, depth: usize) -> Cmp {
    if let Some(a) = &alpha.periodic {
        return Cmp::Decided(t.cmp(a));
    }
    for i in 0..depth {
        match alpha.digits.get(i) {
            Some(&a) if t.at(i) != a => return Cmp::Decided(t.at(i).cmp(&a)),
            Some(_) => {}
            None => return Cmp::Stuck(alpha.stuck_at.unwrap_or(i + 1)),
        }
    }
    Cmp::Undecided
}

/// Decides whether `s` is the only `q`-expansion of `π_q(s)`.
///
/// `s` is unique iff for every `n ≥ 1`, the tail `s_{n+1} s_{n+2} ...` is
/// strictly below α(q) whenever `s_n < M`, and its reflection is strictly below
/// α(q) whenever `s_n > 0`. Tails of an eventually periodic sequence repeat,
/// so finitely many comparisons suffice; each is exact when α(q) is known to
/// be eventually periodic and otherwise uses `depth` digits of α(q).
pub fn uniqueness_certificate(s: &EventuallyPeriodicSeq, base: &BaseEnclosure, depth: usize) -> Result<UniquenessVerdict> {
    let m = base.m();
    let s = if s.m() == m { s.clone() } else { EventuallyPeriodicSeq::new(s.preperiod().to_vec(), s.period().to_vec(), m)? };
    let verdict = check_tails(&s, &alpha_info(base, depth)?, depth)?;
    if let UniquenessVerdict::UnknownToDepth { .. } = verdict {
        // a tail agrees with α(q) for `depth` digits; settle it exactly if α(q) cycles
        if let Some(p) = alpha_periodic(base)? {
            let exact = AlphaInfo { digits: Vec::new(), periodic: Some(p), stuck_at: None };
            return check_tails(&s, &exact, depth);
        }
    }
    Ok(verdict)
}

fn check_tails(s: &EventuallyPeriodicSeq, alpha: &AlphaInfo, depth: usize) -> Result<UniquenessVerdict> {
    let m = s.m();
    let mut undecided = false;
    let mut stuck = None;
    for n in 1..=s.preperiod().len() + s.period().len() {
        let c = s.at(n - 1);
        let tail = s.shift(n);
        let mut checks = Vec::with_capacity(2);
        if c < m {
            checks.push(tail.clone());
        }
        if c > 0 {
            checks.push(tail.reflect());
        }
        for t in checks {
            match compare_with_alpha(&t, alpha, depth) {
                Cmp::Decided(Ordering::Less) => {}
                Cmp::Decided(_) => return Ok(UniquenessVerdict::NotUniqueCertified { witness: n }),
                Cmp::Undecided => undecided = true,
                Cmp::Stuck(p) => stuck = Some(stuck.map_or(p, |q: usize| q.min(p))),
            }
        }
    }
    if let Some(position) = stuck {
        return Err(Error::PrecisionExhausted { position });
    }
    Ok(if undecided { UniquenessVerdict::UnknownToDepth { depth } } else { UniquenessVerdict::UniqueCertified })
}
