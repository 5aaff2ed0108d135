//! Expansions of points in a base `q`: the digit algorithms, the switch
//! region, exhaustive enumeration and uniqueness certificates.

mod digits;
mod point;
mod switch;
mod tree;
mod unique;

pub use digits::{
    alpha_info, alpha_periodic, alpha_prefix, expand_periodic, expand_point, greedy_expansion, lazy_expansion, quasi_greedy_expansion,
    AlphaInfo, ExpansionMode,
};
pub use point::Point;
pub use switch::{block_gap, digit_options, digit_options_point, switch_region, DigitOptions, SwitchBlock, SwitchRegion};
pub use tree::{enumerate_expansions, enumerate_point, ExpansionTree, NodeStatus, TreePath};
pub use unique::{uniqueness_certificate, UniquenessVerdict};
