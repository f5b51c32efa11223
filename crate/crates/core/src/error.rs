use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("relation {0:?} is not a composable path")]
    NotComposable(Vec<String>),
    #[error("relation {0:?} has length < 2")]
    RelationTooShort(Vec<String>),
    #[error("vertex `{0}` is not a node")]
    NotANode(String),
    #[error("algebra is not radical square zero; split a node and saturate split-side component labels instead")]
    NotRadicalSquareZero,
    #[error("rank {rank} out of range 0..={max} at vertex `{vertex}`")]
    RankOutOfRange { vertex: String, rank: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("representation violates relation {0:?}")]
    RelationViolated(Vec<String>),
    #[error("stratum C_r is empty")]
    EmptyStratum,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("coefficient denominator is divisible by the field characteristic {0}")]
    DenominatorVanishes(u64),
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("could not draw an invertible matrix within the retry budget")]
    RetryBudget,
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("weight does not pair to zero with the dimension vector (theta.d = {0})")]
    WeightNotBalanced(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
