//! Exact computational toolkit for generalised umbral moonshine.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeric`]: rationals, phases, cyclotomic numbers, truncated q- and
//!   (q,y)-expansions and certified floating evaluation.
//! - [`groups`]: enumerated permutation groups, commuting pairs and their
//!   orbits under conjugation and `SL2(Z)`, stabiliser congruence groups.
//! - [`cohomology`]: normalised cochains, coboundaries, `H^3(G,U(1))` via the
//!   bar complex, derived 2-cocycles and the multiplier and obstruction phases.
//! - [`projective`]: Burnside–Dixon character tables, central extensions,
//!   projective character tables and decompositions.
//! - [`double`]: representations and modular data of the twisted double
//!   `D^omega(G)`.
//! - [`jacobi`]: theta functions, Appell–Lerch sums, theta decomposition and
//!   the Weil representation.
//! - [`moonshine`]: the lambency pipeline and its verification report.

pub mod cohomology;
pub mod double;
pub mod error;
pub mod groups;
pub mod jacobi;
pub mod moonshine;
pub mod numeric;
pub mod projective;

pub use error::{Error, Result};
