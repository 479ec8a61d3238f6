use thiserror::Error;

use crate::shift::Property;

/// Malformed text input (words, patterns, spec files).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u64),
    #[error("{value} is divisible by {base}")]
    DivisibleByBase { value: u64, base: u64 },
    #[error("argument must be positive")]
    Zero,
    #[error("arithmetic overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("invalid shift spec: {0}")]
    InvalidSpec(String),
    #[error("position {0} is not a positive integer")]
    InvalidPosition(u64),
    #[error("position {position} is constrained to both {first} and {second}")]
    ContradictoryConstraint { position: u64, first: u8, second: u8 },
    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u8, alphabet: u8 },
    #[error("position {position} exceeds the tabulated horizon {horizon}")]
    HorizonExceeded { position: u64, horizon: u64 },
    #[error("{property} is undecidable for this spec: {reason}")]
    Undecidable { property: Property, reason: String },
    #[error("word {0} is not admissible")]
    Inadmissible(String),
    #[error("shift is not mixing")]
    NotMixing,
    #[error("output guard exceeded: {0} items")]
    TooLarge(u128),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Mult(#[from] MultError),
    #[error("base shift is not {0}")]
    MissingProperty(Property),
    #[error("pattern {which} is inadmissible: fiber along class {class} violates the base shift")]
    InadmissiblePattern { which: &'static str, class: u64 },
    #[error("{q} has no prime factor coprime to {l}; use the power route")]
    NoCoprimePrime { q: u64, l: u64 },
    #[error("no simultaneous connector found up to start {bound}")]
    ConnectorNotFound { bound: u64 },
    #[error("multiplier {alpha}*{l}^{k} is below the threshold {l}^{n}")]
    BelowThreshold { alpha: u64, k: u64, l: u64, n: u64 },
    #[error("{q} is neither coprime-routable nor a power of {l}")]
    Unsupported { q: u64, l: u64 },
    #[error("constructed certificate failed verification: {0}")]
    SelfCheck(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("multiplier mismatch: certificate says {stated}, recomputed {actual}")]
    Multiplier { stated: String, actual: String },
    #[error("alpha {alpha} is divisible by {base}")]
    Alpha { alpha: u64, base: u64 },
    #[error("constraint at class {class} depth {depth} expects {expected}, fiber has {found:?}")]
    Constraint {
        class: u64,
        depth: u64,
        expected: u8,
        found: Option<u8>,
    },
    #[error("fiber for class {class} is not an admissible word of the base shift: {word}")]
    Fiber { class: u64, word: String },
    #[error("certificate lists constraint set that differs from the recomputed one")]
    ConstraintList,
    #[error("fiber for class {0} is not a class representative")]
    NotRepresentative(u64),
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultError {
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("no fiber supplied for class {0}")]
    MissingFiber(u64),
    #[error("fiber for class {class} has length {got}, needs {needed}")]
    FiberTooShort { class: u64, needed: u64, got: u64 },
    #[error("{0} is not a class representative")]
    NotRepresentative(u64),
    #[error("fiber chain of class {class} leaves the covered support at position {position}")]
    ChainExitsCoverage { class: u64, position: u64 },
}

/// Malformed shift spec or certificate file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ShiftError),
}

impl From<serde_json::Error> for SpecFileError {
    fn from(e: serde_json::Error) -> Self {
        SpecFileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
        }
    }
}
