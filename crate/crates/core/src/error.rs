use thiserror::Error;

pub use crate::matrix::MatrixError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("no determinant table for n = {0}")]
    UnsupportedN(usize),
    #[error("observation matrix is rank deficient (rank {rank} < {n})")]
    RankDeficient { rank: usize, n: usize },
    #[error("starting vertex is singular")]
    SingularVertex,
    #[error("need at least n = {n} columns, got {k}")]
    TooFewColumns { n: usize, k: usize },
    #[error("rounding tolerance {0} must lie in [0, 0.5)")]
    AmbiguousEpsilon(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
