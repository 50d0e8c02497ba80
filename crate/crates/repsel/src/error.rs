use num::BigRational;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows but row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("negative entry at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize },

    #[error("row {row} sums to {sum} instead of 1")]
    RowSumNotOne { row: usize, sum: BigRational },

    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },

    #[error("candidate set is empty")]
    EmptyCandidateSet,

    #[error("candidate {agent} is out of range for {n} agents")]
    CandidateOutOfRange { agent: usize, n: usize },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("profile space has {size} outcomes, above the guard of {guard}; use Monte Carlo or raise the guard")]
    StateSpaceTooLarge { size: u128, guard: u64 },

    #[error("body size {k} is invalid for {n} agents")]
    InvalidBodySize { k: usize, n: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("mechanism produced an all-zero weight vector")]
    ZeroWeightVector,

    #[error("sweep domain is empty")]
    EmptyDomain,

    #[error("total weight is zero")]
    ZeroTotalWeight,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),

    #[error("matrix file error: {0}")]
    MatrixFile(String),
}
