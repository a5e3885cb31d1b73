//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("d = {d} is not squarefree")]
    NonSquarefreeD { d: u64 },

    #[error("d = {d} must be an integer greater than 1")]
    InvalidD { d: u64 },

    #[error("coordinates ({x}, {y}) violate the parity class of d = {d}")]
    ParityViolation { d: u64, x: String, y: String },

    #[error("elements live in different fields (d = {d1} vs d = {d2})")]
    MixedFields { d1: u64, d2: u64 },

    #[error("element is rational (y = 0) and has no quadratic minimum polynomial")]
    RationalElement,

    #[error("element has norm {norm}, not a unit")]
    NotAUnit { norm: String },

    #[error("unit must be greater than 1")]
    NotGreaterThanOne,

    #[error("{what} = {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("internal oracle mismatch in {context}: {detail}")]
    OracleMismatch { context: &'static str, detail: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("cannot factor zero")]
    ZeroInput,

    #[error("factorization of {value} is incomplete (budget exhausted)")]
    IncompleteFactorization { value: String },

    #[error("factorization incomplete at index n = {index} (|delta| = {value})")]
    IncompleteFactorizationAt { index: u64, value: String },

    #[error("g(x) is only defined for x > e (got {x})")]
    DomainError { x: String },

    #[error("constant {name}: derived {derived} differs from stored {stored} by more than 1e-5")]
    DerivationMismatch {
        name: &'static str,
        stored: f64,
        derived: String,
    },

    #[error("index k = {k} must be odd")]
    KNotOdd { k: u64 },

    #[error("unit must have norm -1")]
    NotNormMinusOne,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("verification of {theorem} failed at {bullet}: {detail}")]
    TheoremMismatch {
        theorem: &'static str,
        bullet: String,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
