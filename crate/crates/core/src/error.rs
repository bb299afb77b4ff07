//! Error type shared by all solvers in the crate.

use thiserror::Error;

/// Errors reported by factorizations and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix is numerically singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("QR iteration failed to converge within the sweep cap")]
    NoConvergence,

    #[error("Schur reordering swap is ill-conditioned at position {0}")]
    SwapIllConditioned(usize),

    #[error("matrix pencil appears singular (det(A - lambda B) == 0 identically)")]
    SingularPencil,

    #[error("equation is not uniquely solvable{0}")]
    NotUniquelySolvable(String),

    #[error("subspace basis block V is numerically singular")]
    VSingular,

    #[error("eigenvalue selection is ambiguous (matching gap below threshold)")]
    SelectionAmbiguous,

    #[error("A + B is singular; doubling transform undefined")]
    SingularSum,

    #[error("H12 iterate is singular; doubling assumptions violated")]
    H12Singular,

    #[error("Z12 iterate is singular; solution recovery failed")]
    Z12Singular,

    #[error("Kronecker operator is singular; equation not uniquely solvable")]
    SingularOperator,

    #[error("oracle rejects dimension {0} (capped at {1})")]
    OracleTooLarge(usize, usize),

    #[error("iteration limit reached without convergence")]
    MaxIterExceeded,

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
