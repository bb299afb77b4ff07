//! Dense solvers for the Sylvester equation `A X + X B = C` and the
//! star-Sylvester equation `A X + X^star B = C` (star = transpose or
//! conjugate transpose), built on an in-crate complex linear algebra kernel:
//! LU, QR, complex Schur with eigenvalue reordering, and matrix pencil
//! analysis. The star equation is solved either through the deflating
//! subspace of its palindromic pencil or by the doubling iteration on the
//! Hermitian/skew split, with a brute-force Kronecker oracle alongside for
//! verification.
//!
//! Everything is generic over the scalar via [`scalar::Scalar`]; the
//! concrete aliases below pin the two supported precisions.

pub mod companion;
pub mod error;
pub mod kron;
pub mod lu;
pub mod matrix;
pub mod pencil;
pub mod qr;
pub mod scalar;
pub mod schur;
pub mod star;
pub mod sylvester;

pub use error::{Error, Result};
pub use matrix::{Matrix, StarOp};
pub use scalar::{Real, Scalar};

/// Complex scalar in single precision.
pub type C32 = num_complex::Complex<f32>;
/// Complex scalar in double precision (the default working type).
pub type C64 = num_complex::Complex<f64>;
/// Single-precision matrix.
pub type Mat32 = Matrix<C32>;
/// Double-precision matrix, the type the CLI and acceptance suite use.
pub type Mat = Matrix<C64>;
