//! Greedy, quasi-greedy and lazy expansions, and α(q).

use std::collections::HashMap;

use serde::Serialize;

use super::point::{Point, SignSet};
use crate::arith::rational::int;
use crate::arith::{BaseEnclosure, RationalInterval};
use crate::error::{Error, Result};
use crate::sequence::{DigitWord, EventuallyPeriodicSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionMode {
    Greedy,
    QuasiGreedy,
    Lazy,
}

/// Decides "value >= 0" (or "> 0" when `strict`) if the sign set allows it.
fn certain(s: SignSet, strict: bool) -> Option<bool> {
    let yes = if strict { s.pos && !s.zero && !s.neg } else { !s.neg };
    let no = if strict { !s.pos } else { s.neg && !s.zero && !s.pos };
    match (yes, no) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

/// Next digit of the chosen algorithm from remainder `r`; `None` when it
/// cannot be certified.
fn next_digit(r: &Point, base: &BaseEnclosure, mode: ExpansionMode) -> Result<Option<u32>> {
    let m = base.m();
    match mode {
        ExpansionMode::Greedy | ExpansionMode::QuasiGreedy => {
            let strict = mode == ExpansionMode::QuasiGreedy;
            for d in (0..=m).rev() {
                match certain(r.step(base, d).sign(base)?, strict) {
                    Some(true) => return Ok(Some(d)),
                    Some(false) => continue,
                    None => return Ok(None),
                }
            }
            Err(Error::domain("remainder left I_q"))
        }
        ExpansionMode::Lazy => {
            for d in 0..=m {
                // q r - d <= M/(q-1)
                let s = r.step(base, d).sign_vs_top(base)?;
                let flipped = SignSet { neg: s.pos, zero: s.zero, pos: s.neg };
                match certain(flipped, false) {
                    Some(true) => return Ok(Some(d)),
                    Some(false) => continue,
                    None => return Ok(None),
                }
            }
            Err(Error::domain("remainder left I_q"))
        }
    }
}

fn check_start(x: &Point, base: &BaseEnclosure, mode: ExpansionMode) -> Result<()> {
    x.require_in_iq(base)?;
    if mode == ExpansionMode::QuasiGreedy {
        let s = x.sign(base)?;
        if !s.pos {
            return Err(Error::domain("quasi-greedy expansion needs x > 0"));
        }
        if s.zero || s.neg {
            return Err(Error::PrecisionExhausted { position: 0 });
        }
    }
    Ok(())
}

/// First `n` digits of the expansion of `x` produced by `mode`.
pub fn expand_point(x: &Point, base: &BaseEnclosure, mode: ExpansionMode, n: usize) -> Result<DigitWord> {
    check_start(x, base, mode)?;
    let mut r = x.clone();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = next_digit(&r, base, mode)?.ok_or(Error::PrecisionExhausted { position: i + 1 })?;
        out.push(d);
        r = r.step(base, d);
    }
    Ok(DigitWord::from_raw(out, base.m()))
}

/// The whole expansion of an exact point when its remainders cycle within
/// `max_steps` digits; `None` otherwise.
pub fn expand_periodic(
    x: &Point,
    base: &BaseEnclosure,
    mode: ExpansionMode,
    max_steps: usize,
) -> Result<Option<EventuallyPeriodicSeq>> {
    if !x.is_exact() {
        return Ok(None);
    }
    check_start(x, base, mode)?;
    let mut seen: HashMap<Point, usize> = HashMap::new();
    let mut r = x.clone();
    let mut out = Vec::new();
    for i in 0..max_steps {
        if let Some(&j) = seen.get(&r) {
            return EventuallyPeriodicSeq::new(out[..j].to_vec(), out[j..].to_vec(), base.m()).map(Some);
        }
        seen.insert(r.clone(), i);
        let d = next_digit(&r, base, mode)?.ok_or(Error::PrecisionExhausted { position: i + 1 })?;
        out.push(d);
        r = r.step(base, d);
    }
    Ok(None)
}

pub fn greedy_expansion(x: &RationalInterval, base: &BaseEnclosure, n: usize) -> Result<DigitWord> {
    expand_point(&Point::from_interval(base, x), base, ExpansionMode::Greedy, n)
}

pub fn quasi_greedy_expansion(x: &RationalInterval, base: &BaseEnclosure, n: usize) -> Result<DigitWord> {
    expand_point(&Point::from_interval(base, x), base, ExpansionMode::QuasiGreedy, n)
}

pub fn lazy_expansion(x: &RationalInterval, base: &BaseEnclosure, n: usize) -> Result<DigitWord> {
    expand_point(&Point::from_interval(base, x), base, ExpansionMode::Lazy, n)
}

/// What is known about α(q) = a(1, q).
#[derive(Clone, Debug)]
pub struct AlphaInfo {
    /// Certified leading digits (at least as many as requested unless `stuck_at` is set).
    pub digits: Vec<u32>,
    /// The full sequence when it is eventually periodic and that was detected.
    pub periodic: Option<EventuallyPeriodicSeq>,
    /// 1-based position of the first digit that could not be certified.
    pub stuck_at: Option<usize>,
}

impl AlphaInfo {
    pub fn digit(&self, i: usize) -> Option<u32> {
        match &self.periodic {
            Some(s) => Some(s.at(i)),
            None => self.digits.get(i).copied(),
        }
    }
}

/// α(q) to at least `n` digits, cached on the base.
pub fn alpha_info(base: &BaseEnclosure, n: usize) -> Result<AlphaInfo> {
    let mut cache = base.alpha.lock().unwrap_or_else(|e| e.into_inner());
    let one = Point::from_interval(base, &RationalInterval::point(int(1)));
    if let Some(p) = &cache.periodic {
        if cache.digits.len() < n {
            cache.digits = p.prefix(n).digits().to_vec();
        }
    } else if cache.digits.len() < n && cache.stuck_at.is_none() {
        let target = n.max(2 * cache.digits.len());
        match expand_point(&one, base, ExpansionMode::QuasiGreedy, target) {
            Ok(w) => cache.digits = w.digits().to_vec(),
            Err(Error::PrecisionExhausted { position }) => {
                // keep what was certified before the stuck digit
                let w = expand_point(&one, base, ExpansionMode::QuasiGreedy, position - 1)?;
                cache.digits = w.digits().to_vec();
                cache.stuck_at = Some(position);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(AlphaInfo { digits: cache.digits.clone(), periodic: cache.periodic.clone(), stuck_at: cache.stuck_at })
}

/// α(q) as an eventually periodic sequence, if the base is exact and the
/// quasi-greedy remainders of 1 cycle within the budget's `max_depth` steps.
pub fn alpha_periodic(base: &BaseEnclosure) -> Result<Option<EventuallyPeriodicSeq>> {
    let mut cache = base.alpha.lock().unwrap_or_else(|e| e.into_inner());
    if !cache.periodic_checked {
        let one = Point::from_interval(base, &RationalInterval::point(int(1)));
        cache.periodic = expand_periodic(&one, base, ExpansionMode::QuasiGreedy, base.budget().max_depth)?;
        cache.periodic_checked = true;
    }
    Ok(cache.periodic.clone())
}

/// First `n` digits of α(q).
pub fn alpha_prefix(base: &BaseEnclosure, n: usize) -> Result<DigitWord> {
    let info = alpha_info(base, n)?;
    if info.digits.len() < n {
        return Err(Error::PrecisionExhausted { position: info.stuck_at.unwrap_or(info.digits.len() + 1) });
    }
    Ok(DigitWord::from_raw(info.digits[..n].to_vec(), base.m()))
}
