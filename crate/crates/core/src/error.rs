use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown Cartan type `{0}`")]
    UnknownCartanType(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("reflection index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("expected two distinct reflections, got {0} twice")]
    SameReflection(usize),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("sequence mismatch: {0}")]
    SequenceMismatch(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("adjacent colors differ at strands {strand} and {next}", next = strand + 1)]
    AdjacentColorsDiffer { strand: usize },
    #[error("strand {strand} out of range for a sequence of length {len}")]
    StrandOutOfRange { strand: usize, len: usize },
    #[error("insertion position {position} out of range for a sequence of length {len}")]
    InvalidPosition { position: usize, len: usize },
    #[error("sequence length {len} exceeds the configured bound {bound}")]
    SizeBoundExceeded { len: usize, bound: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
