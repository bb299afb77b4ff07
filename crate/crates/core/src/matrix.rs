//! Dense row-major matrix over a complex scalar.

use num_traits::{Float, Zero};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Which adjoint is in force: plain transpose or conjugate transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarOp {
    Transpose,
    ConjTranspose,
}

impl StarOp {
    /// Apply the adjoint to a scalar: identity for transpose, conjugation for H.
    pub fn apply<T: Scalar>(&self, z: T) -> T {
        match self {
            StarOp::Transpose => z,
            StarOp::ConjTranspose => z.conj(),
        }
    }
}

impl fmt::Display for StarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarOp::Transpose => write!(f, "T"),
            StarOp::ConjTranspose => write!(f, "H"),
        }
    }
}

/// Dense matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from a row-major slice; errors if the length or any entry is bad.
    pub fn from_rows(rows: usize, cols: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for {}x{}, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        let m = Matrix {
            rows,
            cols,
            data: entries.to_vec(),
        };
        m.check_finite("from_rows")?;
        Ok(m)
    }

    /// Build a square diagonal matrix from its diagonal entries.
    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn check_finite(&self, what: &'static str) -> Result<()> {
        if self.data.iter().all(|z| z.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Apply the active adjoint.
    pub fn star(&self, op: StarOp) -> Self {
        match op {
            StarOp::Transpose => self.transpose(),
            StarOp::ConjTranspose => self.conj_transpose(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| f(self[(i, j)]))
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> T::Real {
        self.data
            .iter()
            .map(|z| z.abs_sqr())
            .fold(T::Real::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T::Real {
        self.data
            .iter()
            .map(|z| z.abs())
            .fold(T::Real::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Copy of the block with rows r0..r1 and columns c0..c1 (half-open).
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 <= r1 && c0 <= c1);
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Stack vertically: [self; other].
    pub fn vstack(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        Ok(m)
    }

    fn dims_match(&self, other: &Matrix<T>, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Matrix<T>) -> Result<Self> {
        self.dims_match(other, "add")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] + other[(i, j)]
        }))
    }

    pub fn try_sub(&self, other: &Matrix<T>) -> Result<Self> {
        self.dims_match(other, "sub")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] - other[(i, j)]
        }))
    }

    pub fn try_mul(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        self.try_add(rhs).expect("matrix add dimension mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix sub dimension mismatch")
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix mul dimension mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn frob_norm_basics() {
        let z = Matrix::<C64>::zeros(3, 2);
        assert_eq!(z.frob_norm(), 0.0);
        let i4 = Matrix::<C64>::identity(4);
        assert!((i4.frob_norm() - 2.0).abs() < 1e-15);
        let m = Matrix::from_rows(1, 2, &[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((m.frob_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn star_is_involution() {
        let m = Matrix::from_rows(2, 2, &[c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0), c(-2.0, 0.1)])
            .unwrap();
        for op in [StarOp::Transpose, StarOp::ConjTranspose] {
            let back = m.star(op).star(op);
            assert_eq!(back, m);
        }
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let a = Matrix::<C64>::zeros(2, 3);
        let b = Matrix::<C64>::zeros(3, 3);
        assert!(a.try_add(&b).is_err());
        assert!(b.try_mul(&b).is_ok());
        assert!(a.try_mul(&a).is_err());
    }

    #[test]
    fn non_finite_rejected_on_construction() {
        let bad = [c(1.0, 0.0), c(f64::NAN, 0.0)];
        assert!(Matrix::from_rows(1, 2, &bad).is_err());
    }
}
