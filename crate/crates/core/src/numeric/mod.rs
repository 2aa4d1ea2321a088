//! Exact arithmetic foundation.

pub mod complex;
pub mod cyclotomic;
pub mod io;
pub mod linalg;
pub mod modring;
pub mod phase;
pub mod qseries;

pub use complex::ComplexApprox;
pub use cyclotomic::Cyclotomic;
pub use phase::{parse_rational, rat, Phase, Rational};
pub use qseries::{JacobiExpansion, QExpansion};
