use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("letter {letter} out of range for alphabet of size {k}")]
    LetterOutOfRange { letter: usize, k: usize },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("invalid alphabet size {0}")]
    InvalidAlphabet(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid Hanoi generator: {0}")]
    InvalidGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration exceeded cap of {cap} elements")]
    Overflow { cap: usize },

    #[error("size bound exceeded: {needed} > {bound}")]
    SizeBound { needed: usize, bound: usize },

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
