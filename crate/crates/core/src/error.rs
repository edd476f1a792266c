//! Error types shared across the crate.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("symbol `{0}` is empty or contains whitespace")]
    BadToken(String),
    #[error("symbol `{0}` belongs to more than one class")]
    Overlap(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown symbol `{symbol}` at position {position}")]
pub struct UnknownSymbol {
    pub symbol: String,
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("the longest common prefix of an empty set is undefined")]
pub struct EmptySet;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DelayError {
    #[error("lengths {a}, {b}, {c}, {d} violate |A| - |B| = |C| - |D| >= 0")]
    PremiseViolated { a: usize, b: usize, c: usize, d: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("no states declared")]
    NoStates,
    #[error("name `{0}` is empty or contains whitespace")]
    BadName(String),
    #[error("undeclared state `{0}`")]
    UndeclaredState(String),
    #[error("undeclared input symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("undeclared stack symbol `{0}`")]
    UndeclaredStackSymbol(String),
    #[error("output contains whitespace character {0:?}")]
    BadOutput(char),
    #[error("symbol `{symbol}` is a {found} symbol but the rule needs a {expected} symbol")]
    WrongKind { symbol: String, expected: crate::nested_words::SymbolKind, found: crate::nested_words::SymbolKind },
}

/// A validation error with the line it comes from, when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub error: ValidationError,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VptError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

/// Two accepting runs on the same word with different outputs.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("the machine is not functional: one input has outputs {first:?} and {second:?}")]
pub struct NotFunctional {
    pub word: Vec<crate::vpt::SymbolId>,
    pub first: crate::delay::Word,
    pub second: crate::delay::Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("more than {limit} configurations below height {height}")]
pub struct StateExplosion {
    pub limit: usize,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("two runs reach the same node with outputs {first:?} and {second:?}; the machine is not functional")]
    Conflict { first: crate::delay::Word, second: crate::delay::Word },
    #[error("return on an empty stack")]
    PopOnEmpty,
    #[error("the machine has no initial state")]
    NoInitialStates,
    #[error(transparent)]
    UnknownSymbol(#[from] UnknownSymbol),
    #[error("the evaluation has already ended")]
    NotRunning,
}
