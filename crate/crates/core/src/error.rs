use thiserror::Error;

use crate::atlas::ChainViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("order relation has a cycle: {}", .cycle.join(" <= "))]
    Cycle { cycle: Vec<String> },

    #[error("model has {size} elements, cap is {cap}")]
    TooManyElements { size: usize, cap: usize },

    #[error("model has no elements")]
    Empty,

    #[error("not a join-semilattice: `{a}` and `{b}` have no least upper bound")]
    NotAJoinSemilattice { a: String, b: String },

    #[error("not a lattice: `{a}` and `{b}` have no greatest lower bound")]
    NotALattice { a: String, b: String },

    #[error("subset is not join-closed: `{a}` v `{b}` = `{join}` escapes it")]
    NotJoinClosed { a: String, b: String, join: String },

    #[error("not downward directed: `{a}` and `{b}` have no common lower bound")]
    NotDownwardDirected { a: String, b: String },

    #[error("arrow is not total on the ambient model: `{a}` -> `{b}` is undefined")]
    ArrowNotTotal { a: String, b: String },

    #[error("arity {n} outside the admissible range {min}..={max}")]
    ArityOutOfRange { n: usize, min: usize, max: usize },

    #[error("enumeration size {n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("{0}")]
    ChainViolation(Box<ChainViolation>),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid predicate: {0}")]
    Predicate(String),

    #[error("invalid canonical code `{0}`")]
    InvalidCode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
