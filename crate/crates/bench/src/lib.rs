//! Shared inputs for the criterion benchmarks.

use univoque::arith::rational::{int, ratio};
use univoque::{AlgebraicReal, BaseEnclosure, Poly};

/// Rational base `n/d` over the alphabet `{0, ..., m}`.
pub fn rational_base(m: u32, n: i64, d: i64) -> BaseEnclosure {
    BaseEnclosure::rational(m, ratio(n, d)).expect("valid base")
}

/// The tribonacci number, root of `x^3 - x^2 - x - 1` in `[1, 2]`.
pub fn tribonacci() -> BaseEnclosure {
    let q = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, -1, 1]), int(1), int(2)).expect("isolating interval");
    BaseEnclosure::algebraic(1, q).expect("valid base")
}
