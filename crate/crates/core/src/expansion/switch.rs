//! The switch region `S_q` and the digit choices it governs.

use serde::Serialize;

use super::point::{Point, Tri};
use crate::arith::rational::int;
use crate::arith::{BaseEnclosure, Rational, RationalInterval};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchBlock {
    /// The larger of the two admissible first digits inside the block.
    pub digit_high: u32,
    pub interval: RationalInterval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchRegion {
    pub blocks: Vec<SwitchBlock>,
}

/// Right end `((i-1)(q-1) + M) / (q^2 - q)` of block `i`.
fn block_right(i: u32, m: u32, q: &Rational) -> Rational {
    let one = int(1);
    (int(i as i64 - 1) * (q - &one) + int(m as i64)) / (q * q - q)
}

/// The blocks `[i/q, ((i-1)(q-1)+M)/(q^2-q)]`, `i = 1..=M`, each enclosed over every
/// `q` in the base enclosure. Both ends decrease in `q`.
pub fn switch_region(base: &BaseEnclosure) -> SwitchRegion {
    let q = base.q();
    let blocks = (1..=base.m())
        .map(|i| {
            let lo = int(i as i64) / q.hi();
            let hi = block_right(i, base.m(), q.lo());
            SwitchBlock { digit_high: i, interval: RationalInterval::spanning(lo, hi) }
        })
        .collect();
    SwitchRegion { blocks }
}

impl SwitchRegion {
    /// Consecutive blocks are certifiably separated after widening each by `delta` on both sides.
    pub fn separated_by(&self, delta: &Rational) -> bool {
        self.blocks
            .windows(2)
            .all(|w| w[0].interval.hi() + delta < w[1].interval.lo() - delta)
    }

    pub fn disjoint(&self) -> bool {
        self.separated_by(&int(0))
    }
}

/// Distance `(2q - 2 - M) / (q^2 - q)` between consecutive blocks at a point base.
pub fn block_gap(m: u32, q: &Rational) -> Rational {
    (int(2) * q - int(2) - int(m as i64)) / (q * q - q)
}

/// First digits available to `x`, or `Ambiguous` when the enclosures cannot decide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DigitOptions {
    Digits(Vec<u32>),
    Ambiguous,
}

/// Digits `d` with `q x - d ∈ I_q`. Two consecutive digits `i-1, i` are both
/// available exactly when `x` lies in block `i` of the switch region; for
/// `q ≤ q_GR` blocks may overlap and three digits can occur.
pub fn digit_options_point(x: &Point, base: &BaseEnclosure) -> Result<DigitOptions> {
    x.require_in_iq(base)?;
    let mut digits = Vec::new();
    for d in 0..=base.m() {
        match x.step(base, d).in_iq(base)? {
            Tri::Yes => digits.push(d),
            Tri::No => {}
            Tri::Unknown => return Ok(DigitOptions::Ambiguous),
        }
    }
    Ok(DigitOptions::Digits(digits))
}

pub fn digit_options(x: &RationalInterval, base: &BaseEnclosure) -> Result<DigitOptions> {
    digit_options_point(&Point::from_interval(base, x), base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;
    use crate::arith::{AlgebraicReal, Poly};

    fn phi() -> BaseEnclosure {
        let a = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, 1]), int(1), int(2)).unwrap();
        BaseEnclosure::algebraic(1, a).unwrap()
    }

    #[test]
    fn switch_region_examples() {
        let r = switch_region(&BaseEnclosure::rational(1, int(2)).unwrap());
        assert_eq!(r.blocks[0].interval, RationalInterval::point(ratio(1, 2)));
        let r = switch_region(&phi());
        let b = &r.blocks[0].interval;
        assert!(b.lo() > &ratio(6180339, 10000000) && b.lo() < &ratio(6180340, 10000000));
        assert!(b.contains(&int(1)) && b.hi() - int(1) < ratio(1, 1 << 50));
        let r = switch_region(&BaseEnclosure::rational(2, ratio(5, 2)).unwrap());
        assert_eq!(r.blocks[0].interval, RationalInterval::spanning(ratio(2, 5), ratio(8, 15)));
        assert_eq!(r.blocks[1].interval, RationalInterval::spanning(ratio(4, 5), ratio(14, 15)));
        assert!(r.disjoint());
    }

    #[test]
    fn digit_options_examples() {
        let b = BaseEnclosure::rational(2, ratio(5, 2)).unwrap();
        assert_eq!(digit_options(&RationalInterval::point(int(0)), &b).unwrap(), DigitOptions::Digits(vec![0]));
        assert_eq!(digit_options(&RationalInterval::point(ratio(7, 10)), &b).unwrap(), DigitOptions::Digits(vec![1]));
        assert_eq!(
            digit_options(&RationalInterval::point(ratio(9, 10)), &b).unwrap(),
            DigitOptions::Digits(vec![1, 2])
        );
        assert_eq!(
            digit_options(&RationalInterval::point(ratio(4, 5)), &phi()).unwrap(),
            DigitOptions::Digits(vec![0, 1])
        );
        let straddle = RationalInterval::spanning(ratio(1, 2), ratio(9, 10));
        assert_eq!(digit_options(&straddle, &b).unwrap(), DigitOptions::Ambiguous);
        assert!(digit_options(&RationalInterval::point(int(5)), &b).is_err());
    }

    #[test]
    fn options_match_blocks_at_rational_bases() {
        for (m, q) in [(1, ratio(9, 5)), (2, ratio(13, 5)), (3, ratio(7, 2)), (1, ratio(3, 2))] {
            let base = BaseEnclosure::rational(m, q).unwrap();
            let region = switch_region(&base);
            let top = base.i_q_hi();
            for k in 0..=200 {
                let x = top.lo() * ratio(k, 200);
                let DigitOptions::Digits(ds) = digit_options(&RationalInterval::point(x.clone()), &base).unwrap() else {
                    panic!("exact base")
                };
                for blk in &region.blocks {
                    let inside = blk.interval.contains(&x);
                    let both = ds.contains(&blk.digit_high) && ds.contains(&(blk.digit_high - 1));
                    assert_eq!(inside, both, "M={m} x={x}");
                }
            }
        }
    }
}
