use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("capacity exceeded: {what} needs {requested}, cap is {cap}")]
    Capacity {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("invalid index list: {0}")]
    InvalidIndex(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: entries ({row}, {col}) and ({col}, {row}) are not conjugate")]
    NotHermitian { row: usize, col: usize },

    #[error("diagonal entry {index} is not 1")]
    DiagonalNotOne { index: usize },

    #[error("not PSD: minimum eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Kraus diagonals are not trace preserving at index {index} (sum of |a_k|^2 = {value})")]
    Normalization { index: usize, value: f64 },

    #[error("degenerate unit: {0}")]
    DegenerateUnit(String),

    #[error(
        "graph of C has a single connected component; by the complete-graph obstruction no \
         tensor power yields a private algebra through this construction"
    )]
    Obstruction,

    #[error("algebra is not unital")]
    NonUnital,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("algebra closure did not converge within dimension {0}")]
    NotConverged(usize),
}
