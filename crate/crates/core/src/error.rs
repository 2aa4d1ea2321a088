use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("conductor {0} exceeds the configured cap {1}")]
    ConductorOverflow(u64, u64),
    #[error("incompatible exponent moduli {0} and {1}")]
    IncompatibleModuli(u64, u64),
    #[error("evaluation point must lie in the upper half plane (Im tau = {0})")]
    NotUpperHalfPlane(f64),
    #[error("group order bound {0} exceeded")]
    OrderBound(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("elements {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("invalid congruence subgroup data: {0}")]
    Congruence(String),
    #[error("matrix has determinant {0}, expected 1")]
    Determinant(i64),
    #[error("elliptic shift leaves the expansion ring: {0}")]
    EllipticShift(String),
    #[error("expansion is not elliptic invariant: {0}")]
    NotElliptic(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("representation data invalid: {0}")]
    Representation(String),
    #[error("linear algebra: {0}")]
    LinAlg(String),
    #[error("eigenspace of dimension {0} found; at most 1 expected")]
    EigenspaceDimension(usize),
    #[error("lambency data: {0}")]
    Data(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
