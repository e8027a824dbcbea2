//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field order {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    OwnerMismatch,
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse element {text:?} for GF({p}^{m})")]
    BadElementText { text: String, p: u64, m: usize },
    #[error("element text codec is ambiguous for p > 10 with m > 1")]
    UnsupportedTextCodec,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system is rank-deficient; solution not unique")]
    AmbiguousSolution,
    #[error("generator matrix does not have full row rank")]
    NotFullRank,
    #[error("evaluation points must be pairwise distinct")]
    RepeatedAlpha,
    #[error("no parity check with invertible top block exists for this code")]
    NoSystematicForm,
    #[error(
        "first K columns of the generator are linearly dependent; refusing to permute columns"
    )]
    CannotSystematize,
    #[error("enumeration of {size} states exceeds the guard of {guard}")]
    EnumerationGuard { size: u128, guard: u128 },
    #[error("query does not lie in the configured query space")]
    QueryOutsideSpace,
    #[error("arity mismatch: polynomial has {expected} variables, point has {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("batch of {got} functions does not match the {expected} expected per iteration")]
    BatchSizeMismatch { expected: usize, got: usize },
    #[error("infeasible configuration: {0}")]
    InfeasibleConfiguration(String),
    #[error("decoded syndrome is inconsistent with the recorded responses")]
    CorruptedResponse,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
