//! Exact piecewise-linear dynamics of cluster mutation loops.
//!
//! The crate tracks the action of mutation loops (sequences of matrix
//! mutations and index swaps that return to the starting exchange matrix)
//! on tropical cluster coordinates, detects sign stability of that action,
//! and extracts stable presentation matrices, cluster stretch factors and
//! algebraic entropy. All dynamics are computed in exact rational
//! arithmetic; floating point only appears in root approximations and
//! eigen-direction solves, each carrying an explicit error bound.

pub mod cg;
pub mod cone;
pub mod examples;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod seed;
pub mod sign;
pub mod stability;
pub mod surface;
pub mod trop;

use thiserror::Error;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (unfrozen 1..={n_uf})")]
    IndexOutOfRange { index: usize, n_uf: usize },
    #[error("permutation mixes the unfrozen block 1..={n_uf} with the frozen block")]
    BlockMixingPermutation { n_uf: usize },
    #[error("matrix is not skew-symmetric at ({i},{j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("entry ({i},{j}) must be an integer outside the frozen block")]
    NonIntegerEntry { i: usize, j: usize },
    #[error("sign sequence is not strict: entry {entry} is zero")]
    NonStrictSign { entry: usize },
    #[error("sign sequence length {got} does not match the {expected} horizontal steps")]
    SignLengthMismatch { got: usize, expected: usize },
    #[error("path is not a mutation loop: endpoint exchange matrix differs from the start")]
    NotALoop,
    #[error("unknown builtin example `{0}`")]
    UnknownBuiltin(String),
    #[error("edge {0} is the inner edge of a self-folded triangle: tagged flip required, unsupported")]
    TaggedFlipRequired(usize),
    #[error("edge {0} is a boundary edge and cannot be flipped")]
    BoundaryFlip(usize),
    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),
    #[error("missing puncture incidence data")]
    MissingIncidence,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no stability consensus: {0}")]
    NoConsensus(String),
    #[error("spectral anomaly: {0}")]
    Anomaly(String),
    #[error("sign-coherence violated in row {row}: c-vector has mixed signs")]
    SignCoherenceViolation { row: usize },
    #[error("c-matrix update routes disagree at step {step}")]
    CMatrixRouteMismatch { step: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}
