use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Domain failures (a point outside a factorization cell, a divergent
/// integral) are ordinary values here, never panics: they are reachable from
/// perfectly valid user input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({0}x{1})")]
    NonSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is singular")]
    Singular,
    #[error("spectrum is not clustered at 1; matrix is not unipotent")]
    NotUnipotent,
    #[error("element is not in the group: {0}")]
    NotInGroup(String),
    #[error("element is not in the Lie algebra: {0}")]
    NotInAlgebra(String),
    #[error("point is not in the bounded domain")]
    NotInDomain,
    #[error("element is outside the dense cell P+ K_C P-")]
    NotInDenseCell,
    #[error("element is outside the cell P K_C N_C: {0}")]
    NotInCell(String),
    #[error("membership test inconclusive: {0}")]
    Inconclusive(String),
    #[error("element does not lie in the required subspace: {0}")]
    NotInSubspace(String),
    #[error("element is not in the compact group K ∩ L")]
    NotInKL,
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("representation has no joint highest-weight eigenvector")]
    NoHighestWeight,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
