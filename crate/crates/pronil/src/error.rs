//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by parsing, linear algebra and the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed rule file (duplicate left-hand side, empty image, unknown
    /// symbol, bad token and similar).
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An operation that needs a square matrix got a rectangular one.
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Matrix dimensions do not match the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The reciprocal of the zero polynomial is undefined.
    #[error("the zero polynomial has no reciprocal")]
    ZeroPolynomial,

    /// A modulus that must be prime is not.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A prime factor does not fit in the machine word used for modular
    /// arithmetic.
    #[error("prime factor {0} exceeds the supported modulus range")]
    PrimeTooLarge(String),

    /// Primitivity test applied to a matrix with a negative entry.
    #[error("matrix has a negative entry at ({row},{col})")]
    NegativeEntry { row: usize, col: usize },

    /// The operation requires a primitive substitution.
    #[error("substitution is not primitive")]
    NotPrimitive,

    /// The operation requires an aperiodic substitution.
    #[error("substitution generates a periodic shift")]
    PeriodicInput,

    /// A pair of words that is not a connection was supplied.
    #[error("invalid connection: {0}")]
    InvalidConnection(String),

    /// Malformed finite-group specification.
    #[error("invalid group spec: {0}")]
    GroupSpec(String),

    /// A word that must lie in the factor language does not.
    #[error("word outside the factor language: {0}")]
    NotAFactor(String),

    /// Empty pattern passed to the occurrence counter.
    #[error("occurrence counting needs a non-empty pattern")]
    EmptyPattern,

    /// The lazy ray scan exceeded its symbol budget.
    #[error("ray scan exceeded the limit of {limit} symbols (set {var} to raise it)")]
    RayLimit { limit: u64, var: &'static str },

    /// A postcondition of the cyclotomic pair extraction failed.
    #[error("cyclotomic pair extraction failed: {0}")]
    XiPair(String),

    /// Violation of an operation precondition not covered by a specific kind.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
