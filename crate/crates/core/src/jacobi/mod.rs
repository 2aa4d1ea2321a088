//! Theta functions, Appell–Lerch sums, theta decomposition and the Weil
//! representation.

pub mod appell;
pub mod decompose;
pub mod numeric;
pub mod theta;
pub mod weil;

pub use appell::{appell_lerch, polar_part, polar_sum, AppellLerchSum, LerchExpansion, PolarTable, PolePart};
pub use decompose::{epsilon, minimal_rep, theta_decompose, theta_recompose, Symmetry, VectorValuedForm};
pub use theta::{invert_y, theta_mr, unary_theta, ThetaVector};
pub use numeric::{mu_eval, numeric_modular_check, theta_eval, weil_check, CheckReport};
pub use weil::{weil_rep, weil_rep_word, WeilMatrix};
