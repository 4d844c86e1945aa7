use thiserror::Error;

use crate::system::ColumnSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },

    #[error("a linear system needs at least one column")]
    NoColumns,

    #[error("{what} is ill-defined: denominator vanishes at Q = {witness}")]
    IllDefined { what: &'static str, witness: ColumnSet },

    #[error("r_Q = 0 for Q = {0}; the subsystem is empty")]
    EmptySubsystem(ColumnSet),

    #[error("{what} refuses m = {m} (cap {cap})")]
    CapExceeded { what: &'static str, m: usize, cap: usize },

    #[error("vector is not a solution of the system")]
    NotASolution,

    #[error("coefficient too large for machine-word enumeration")]
    Overflow,

    #[error("workload too large: {0}")]
    TooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
