use thiserror::Error;

use crate::program::AtomId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("rule references atom {0} outside the atom table")]
    UnknownAtom(AtomId),
    #[error("rule for {head} has atom {atom} both positive and negated")]
    ContradictoryBody { head: AtomId, atom: AtomId },
    #[error("OR-rule for {head} has an empty body")]
    EmptyOrBody { head: AtomId },
    #[error("rule {rule} is an OR-rule; expected conjunctive rules only")]
    UnexpectedOrRule { rule: usize },
    #[error("program is not definite (rule {rule} has a negative literal)")]
    NotDefinite { rule: usize },
    #[error("rules {first} and {second} both define {head}; program is not standardized")]
    SdViolation {
        head: AtomId,
        first: usize,
        second: usize,
    },
}

/// Error in `.lp` or edge-list text, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("entry ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("COO entries must be sorted row-major without duplicates (entry {position})")]
    Unsorted { position: usize },
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("rules {first} and {second} both define atom {head}")]
    HeadClash {
        head: AtomId,
        first: usize,
        second: usize,
    },
    #[error("rule {rule} has negation atom {head} as its head")]
    NegationHead { rule: usize, head: AtomId },
    #[error("guess explosion: {free} free negation atoms exceed the cap of {cap}")]
    GuessExplosion { free: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("no fixpoint after {iterations} iterations on {atoms} atoms")]
    NoConvergence { iterations: usize, atoms: usize },
    #[error("brute-force enumeration over {atoms} atoms exceeds the cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
    #[error("memory bound: a dense {side}x{side} matrix needs {bytes} bytes, limit is {limit}")]
    DenseMemoryBound { side: usize, bytes: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Parameters(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty graph")]
    Empty,
}
