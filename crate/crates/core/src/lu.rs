//! LU factorization with partial pivoting and the linear solves built on it.

use num_traits::ToPrimitive;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Scalar};

/// Packed LU factors of a square matrix, `P A = L U`.
pub struct Lu<T: Scalar> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    scale: T::Real,
}

impl<T: Scalar> Lu<T> {
    /// Factor with partial pivoting. A pivot smaller than `u * n * ||a||_F`
    /// is treated as an exact singularity.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU of {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let scale = a.frob_norm();
        let threshold = T::Real::unit_roundoff() * T::Real::of(n as f64) * scale;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut p = k;
            let mut pmax = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            if pmax <= threshold {
                return Err(Error::SingularMatrix {
                    pivot: pmax.to_f64().unwrap_or(0.0),
                    threshold: threshold.to_f64().unwrap_or(0.0),
                });
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                for j in k + 1..n {
                    let s = m * lu[(k, j)];
                    lu[(i, j)] -= s;
                }
            }
        }
        Ok(Lu { lu, perm, scale })
    }

    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// Solve A X = B for a multi-column right-hand side.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.n();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "lu_solve rhs has {} rows, expected {}",
                rhs.rows(),
                n
            )));
        }
        let k = rhs.cols();
        let mut x = Matrix::zeros(n, k);
        // permute rhs
        for i in 0..n {
            for j in 0..k {
                x[(i, j)] = rhs[(self.perm[i], j)];
            }
        }
        // forward substitution (unit lower)
        for i in 1..n {
            for c in 0..i {
                let m = self.lu[(i, c)];
                if m.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let s = m * x[(c, j)];
                    x[(i, j)] -= s;
                }
            }
        }
        // back substitution
        for i in (0..n).rev() {
            let d = self.lu[(i, i)];
            for j in 0..k {
                let mut s = x[(i, j)];
                for c in i + 1..n {
                    s -= self.lu[(i, c)] * x[(c, j)];
                }
                x[(i, j)] = s / d;
            }
        }
        x.check_finite("lu_solve")?;
        Ok(x)
    }

    /// Explicit inverse (desk-scale sizes only).
    pub fn inverse(&self) -> Result<Matrix<T>> {
        self.solve(&Matrix::identity(self.n()))
    }

    /// Frobenius-norm condition estimate `||A||_F * ||A^-1||_F`.
    pub fn cond_estimate(&self) -> Result<T::Real> {
        Ok(self.scale * self.inverse()?.frob_norm())
    }
}

/// Solve `a x = rhs` by LU with partial pivoting.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, rhs: &Matrix<T>) -> Result<Matrix<T>> {
    Lu::factor(a)?.solve(rhs)
}

/// Condition estimate of a square matrix; `None` when it is numerically singular.
pub fn cond_estimate<T: Scalar>(a: &Matrix<T>) -> Option<T::Real> {
    Lu::factor(a).ok().and_then(|f| f.cond_estimate().ok())
}
