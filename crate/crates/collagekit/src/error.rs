use thiserror::Error;

/// Errors surfaced by constructors and operations.
///
/// The split mirrors the validation contract: `Structural` covers boundary
/// and encoding mismatches (wrong source/target, ragged tables, bad indices),
/// while law violations discovered by validators are reported through
/// [`crate::enriched::ValidationReport`] rather than through this type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CkError {
    /// Boundary mismatch: an operation was handed cells that do not compose.
    #[error("boundary mismatch: {0}")]
    Boundary(String),

    /// Malformed encoding (ragged table, index out of range, wrong base kind).
    #[error("structural error: {0}")]
    Structural(String),

    /// A quantale table failed one of the exhaustively checked laws.
    #[error("invalid quantale: {0}")]
    Quantale(String),

    /// A 1-cell was required to be tight but is not.
    #[error("not tight: {0}")]
    NotTight(String),

    /// Arity-class violation (e.g. a singleton-arity category with several
    /// objects, or a coproduct outside the arity class).
    #[error("arity violation: {0}")]
    Arity(String),

    /// A bounded search ran out of budget; the payload describes the frontier
    /// at which enumeration stopped.
    #[error("search budget exhausted: {0}")]
    Budget(String),

    /// Unsupported operation for this base instance.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// I/O or serialization problems at the CLI boundary.
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, CkError>;

impl CkError {
    pub fn boundary(msg: impl Into<String>) -> Self {
        CkError::Boundary(msg.into())
    }
    pub fn structural(msg: impl Into<String>) -> Self {
        CkError::Structural(msg.into())
    }
}
