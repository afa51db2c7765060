use thiserror::Error;

/// Errors raised while building complexes, operators and reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("complex violates standing assumptions: {0}")]
    Assumption(String),

    #[error("dimension {q} out of range for this operation (valid {lo}..={hi})")]
    DimensionOutOfRange { q: usize, lo: usize, hi: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0}")]
    NotNeighbors(String),

    #[error("graph has no edges in dimension {q}")]
    EmptyEdgeSet { q: usize },

    #[error("unknown simplex {0:?}")]
    UnknownSimplex(Vec<usize>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit status used by the command-line tool and mirrored by the C status codes:
    /// 2 input/validation, 3 dimension range, 4 precondition, 5 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::InvalidParams(_)
            | Error::Assumption(_)
            | Error::NotNeighbors(_)
            | Error::UnknownSimplex(_) => 2,
            Error::DimensionOutOfRange { .. } | Error::DimensionMismatch(_) | Error::EmptyEdgeSet { .. } => 3,
            Error::Precondition(_) => 4,
            Error::Numeric(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
