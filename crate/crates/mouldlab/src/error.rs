use thiserror::Error;

/// Errors raised by the algebra, the operators and the harnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("a denominator form vanishes under the substitution")]
    DenominatorVanishes,
    #[error("side mismatch: operation expects {expected} moulds, got {found}")]
    SideMismatch { expected: &'static str, found: &'static str },
    #[error("invalid decomposition (i={i}, j={j}) of a word of length {r}")]
    InvalidDecomposition { i: usize, j: usize, r: usize },
    #[error("bad empty-word value: expected {expected}, found {found}")]
    BadEmptyValue { expected: String, found: String },
    #[error("series not stable at order {order}: the next term is nonzero at depth {depth}")]
    OrderInsufficient { order: usize, depth: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("linear system has no solution at the requested profile: {0}")]
    Infeasible(String),
    #[error("series is not in the kernel of the derivation a -> 1, b -> 0 (first offending word: {0})")]
    NotInKernel(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("precondition failed: {0}")]
    Inapplicable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
