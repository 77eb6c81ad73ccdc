use alloc::string::String;

/// Failures surfaced by the algebra kernel.
///
/// Infinite lengths are not errors; see [`crate::series::Length`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("shift mismatch: {0}")]
    ShiftMismatch(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("CAP_EXCEEDED: {0}")]
    CapExceeded(String),
    #[error("NOT_APPLICABLE: {0}")]
    NotApplicable(String),
    #[error("RETRIES_EXHAUSTED after {0} attempts")]
    RetriesExhausted(u32),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("too many variables: {0} (at most 16)")]
    TooManyVariables(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
