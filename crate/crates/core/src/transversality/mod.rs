//! Transversality of power series with coefficients in `{-M, ..., M}` and the
//! root solver built on it.

mod inspection;
mod root;
mod star;

pub use inspection::{omega, verify_inspection_inequalities, InspectionCertificate};
pub use root::{g_at_base, transversality_root, RootResult};
pub use star::{star_function, verify_star, StarFunctionSpec, TransversalityCertificate};
