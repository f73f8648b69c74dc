//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: expected a function on {expected} elements, got {got}")]
    DomainMismatch { expected: usize, got: usize },

    #[error(
        "dimension mismatch for irrep `{irrep}`: declared {declared}, matrix is {rows}x{cols}"
    )]
    IrrepShape {
        irrep: String,
        declared: usize,
        rows: usize,
        cols: usize,
    },

    #[error("block `{block}` has shape {rows}x{cols}, expected {expected}x{expected}")]
    BlockShape {
        block: String,
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("unknown irrep label `{0}`")]
    UnknownIrrep(String),

    #[error("factor tables failed verification: {0}")]
    UnverifiedFactors(String),

    #[error("product domains differ: left factor is `{left}`, right factor is `{right}`")]
    FactorsDiffer { left: String, right: String },

    #[error("function is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("function is not normalized: value at identity is {re}+{im}i, expected 1")]
    Unnormalized { re: f64, im: f64 },

    #[error("operator is not a state: {0}")]
    NotAState(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("map rejected: a positive-definiteness counterexample is on record")]
    MapNotPd,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("{0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
