use thiserror::Error;

use crate::complex::Chain;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("poset element {0} appears more than once")]
    DuplicateElement(u32),
    #[error("unknown poset element {0}")]
    UnknownElement(u32),
    #[error("order relation is not {0}")]
    BadOrder(&'static str),
    #[error("{0} is not a strictly increasing chain in the ambient poset")]
    NotAChain(Chain),
    #[error("complexes live over different ambient posets")]
    AmbientMismatch,
    #[error("not a subcomplex: {0} is missing")]
    NotSubcomplex(Chain),
    #[error("decoration {0} is not a cell of the right dimension")]
    BadDecoration(Chain),
    #[error("regime {0} does not allow {1}")]
    RegimeViolation(&'static str, &'static str),
    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: u32, dim: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },
    #[error("family members are not pairwise disjoint")]
    NotDisjoint,
    #[error("family is not {0} dull")]
    NotDull(&'static str),
    #[error("invalid permutation {0:?}")]
    BadPermutation(Vec<u32>),
    #[error("intersection is not a union of codimension-one faces")]
    NotHornShaped,
    #[error("hypothesis check failed: {0}")]
    Falsified(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
