use thiserror::Error;

use crate::sheaf::Space;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse weight sequence {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid weight sequence: {0}")]
    InvalidSequence(String),

    #[error("canonical extension needs a positive K-level, got {0}")]
    NonPositiveKLevel(i64),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("group of order {order} exceeds the enumeration limit {limit}")]
    TooLargeGroup { order: u64, limit: u64 },

    #[error("inconsistent degrees: {0}")]
    InconsistentDegrees(String),

    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(i32),

    #[error("resolution construction failed: {0}")]
    ResolutionConstructionFailure(String),

    #[error("{what} is not defined on {space:?}")]
    WrongSide { what: String, space: Space },

    #[error("operation needs m, n >= {needed}, got m = {m}, n = {n}")]
    TooFewVariables { needed: usize, m: usize, n: usize },

    #[error("unsupported weights: {0}")]
    UnsupportedWeights(String),

    #[error("pushforward of O_Y({p},{q}) along {side:?} has no closed form (offending E-power {q_ebar})")]
    PushforwardNotClosedForm { side: Space, p: i64, q: i64, q_ebar: i64 },

    #[error("K-level precondition fails: sum(a) = {sum_a} > sum(b) = {sum_b}; swap sides")]
    PreconditionKLevel { sum_a: i64, sum_b: i64 },

    #[error("character box with {0} candidates exceeds the configured limit")]
    BoxTooLarge(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
