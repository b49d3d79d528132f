use thiserror::Error;

/// Errors shared by all engine layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("universe size {size} exceeds cap {cap}")]
    UniverseCap { size: usize, cap: usize },
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{symbol}` expects arity {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("element {element} is not in a universe of size {universe}")]
    ForeignElement { element: usize, universe: usize },
    #[error("unknown representative {0}")]
    UnknownRepresentative(usize),
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
