use thiserror::Error;

use crate::election::CandidateId;

/// Errors raised by the model, the solvers and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown candidate id {0}")]
    UnknownCandidate(CandidateId),

    #[error("unknown candidate name `{0}`")]
    UnknownCandidateName(String),

    #[error("approval width r={r} must satisfy 0 < r < m={m}")]
    WidthOutOfRange { r: usize, m: usize },

    #[error("vote is not a permutation of the {m} candidates: {detail}")]
    NotAPermutation { m: usize, detail: String },

    #[error("votes range over inconsistent candidate sets")]
    InconsistentCandidates,

    #[error("peak bound k={k} outside 1..={max}")]
    PeakBoundOutOfRange { k: usize, max: usize },

    #[error("instance too large for exhaustive search: {what} = {size} exceeds cap {cap}")]
    Capacity {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("vertex {vertex} has degree {degree}, above the allowed maximum 3")]
    DegreeTooHigh { vertex: usize, degree: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance fails validation: {0}")]
    Validation(String),

    #[error("{0}")]
    OutOfScope(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
