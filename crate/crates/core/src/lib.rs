//! Certified computations for expansions of real numbers in non-integer bases.

pub mod arith;
pub mod constants;
pub mod dimension;
pub mod error;
pub mod expansion;
pub mod sequence;
pub mod transversality;
pub mod two_expansion;

pub use arith::{
    certified_sign, eval_diff, eval_pi, AlgebraicReal, BaseEnclosure, FieldElem, Poly, Rational, RationalInterval,
    RefinementBudget, SignResult,
};
pub use error::{Error, Result};
pub use sequence::{kl_sequence, thue_morse, DiffSeries, DigitWord, EventuallyPeriodicSeq};
