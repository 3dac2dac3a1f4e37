use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("edge ({0}, {1}) is a loop")]
    Loop(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid parameters for {family}: {message}")]
    BadParameters { family: String, message: String },
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("generator {index} is not an automorphism of the graph")]
    NotAnAutomorphism { index: usize },
    #[error("edge set is not a perfect matching: {0}")]
    NotAPerfectMatching(String),
    #[error("undefined for the trivial group")]
    TrivialGroup,
    #[error("brute force refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}
