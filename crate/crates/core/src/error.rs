use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input vectors are linearly dependent over the rationals")]
    DependentInput,
    #[error("epimorphism coefficients are not primitive (gcd != 1)")]
    NotPrimitive,
    #[error("form is not the designated rank-6 counterexample form")]
    WrongForm,
    #[error("gamma = {gamma} is not admissible for beta = {beta}")]
    BadGamma { beta: usize, gamma: usize },
    #[error("rank r = {r} violates 2r >= beta = {beta}")]
    BadRank { beta: usize, r: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("group elements come from different groups (e = {0} vs e = {1})")]
    MixedGroups(i64, i64),
    #[error("group of order {order} exceeds the search bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
