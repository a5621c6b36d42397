use thiserror::Error;

/// Errors raised by the library.
///
/// Certificate-style failures (a cover that misses a region, a length bound
/// that is violated) are not errors; they are carried by the report types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix does not have full column rank (rank {rank}, {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },
    #[error("expected integer entries: {0}")]
    NotInteger(String),
    #[error("lattice is not contained in the given superlattice")]
    NotSublattice,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("a piece may not have the zero cone")]
    ZeroConePiece,
    #[error("halfspace and generator descriptions disagree")]
    InconsistentCone,
    #[error("polyhedral function is not valid: {0}")]
    InvalidPolyFun(String),
    #[error("operation requires a function on R^2, got dimension {0}")]
    NotPlanar(usize),
    #[error("level must be a positive rational")]
    NonPositiveLevel,
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid branch: {0}")]
    InvalidBranch(String),
    #[error("branch {branch} fails the independence certificate")]
    DependentBranch { branch: usize },
    #[error("invalid Leary-Minasyan data: {0}")]
    InvalidGroup(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
