//! Householder QR, column-pivoted QR, and least-squares solves.

use num_traits::{Float, One, Zero};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Apply the Householder reflector `I - beta v v^H` (v over rows r0..) to the
/// columns c0.. of `m` from the left.
fn reflect_left<T: Scalar>(m: &mut Matrix<T>, v: &[T], beta: T::Real, r0: usize, c0: usize) {
    let rows = v.len();
    for j in c0..m.cols() {
        let mut w = T::zero();
        for i in 0..rows {
            w += v[i].conj() * m[(r0 + i, j)];
        }
        w = w * T::from_real(beta);
        for i in 0..rows {
            let upd = w * v[i];
            m[(r0 + i, j)] -= upd;
        }
    }
}

/// Apply the same reflector from the right to the rows r0.. of `m`:
/// `m <- m (I - beta v v^H)`.
fn reflect_right<T: Scalar>(m: &mut Matrix<T>, v: &[T], beta: T::Real, c0: usize, r0: usize) {
    let cols = v.len();
    for i in r0..m.rows() {
        let mut w = T::zero();
        for j in 0..cols {
            w += m[(i, c0 + j)] * v[j];
        }
        w = w * T::from_real(beta);
        for j in 0..cols {
            let upd = w * v[j].conj();
            m[(i, c0 + j)] -= upd;
        }
    }
}

/// Build the Householder vector for x, returning (v, beta, alpha) with
/// `(I - beta v v^H) x = alpha e1` and `alpha = -phase(x0) ||x||`.
fn householder<T: Scalar>(x: &[T]) -> Option<(Vec<T>, T::Real, T)> {
    let norm = x
        .iter()
        .map(|z| z.abs_sqr())
        .fold(T::Real::zero(), |a, b| a + b)
        .sqrt();
    if norm == T::Real::zero() {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.abs() == T::Real::zero() {
        T::one()
    } else {
        x0 * T::from_real(T::Real::one() / x0.abs())
    };
    let alpha = -phase * T::from_real(norm);
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vnorm2 = v
        .iter()
        .map(|z| z.abs_sqr())
        .fold(T::Real::zero(), |a, b| a + b);
    if vnorm2 == T::Real::zero() {
        return None;
    }
    let beta = (T::Real::one() + T::Real::one()) / vnorm2;
    Some((v, beta, alpha))
}

/// Householder QR with the deterministic sign convention: the diagonal of R
/// is real and non-negative.
pub fn qr_decompose<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (n, m) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    for k in 0..n.min(m) {
        let x: Vec<T> = (k..n).map(|i| r[(i, k)]).collect();
        if let Some((v, beta, _)) = householder(&x) {
            reflect_left(&mut r, &v, beta, k, k);
            reflect_right(&mut q, &v, beta, k, 0);
        }
        for i in k + 1..n {
            r[(i, k)] = T::zero();
        }
    }
    // sign fix: make diag(R) real non-negative
    for k in 0..n.min(m) {
        let d = r[(k, k)];
        let da = d.abs();
        if da > T::Real::zero() {
            let phase = d * T::from_real(T::Real::one() / da);
            let ph_conj = phase.conj();
            for j in k..m {
                r[(k, j)] = r[(k, j)] * ph_conj;
            }
            for i in 0..n {
                q[(i, k)] = q[(i, k)] * phase;
            }
        }
    }
    (q, r)
}

/// Column-pivoted QR: returns (q, r, piv) with `a[:, piv] = q r` and the
/// diagonal of R non-increasing in magnitude.
pub fn qr_pivoted<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>, Vec<usize>) {
    let (n, m) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    let mut piv: Vec<usize> = (0..m).collect();
    for k in 0..n.min(m) {
        // pick the remaining column with the largest trailing norm
        let mut best = k;
        let mut best_norm = T::Real::zero();
        for j in k..m {
            let nj = (k..n)
                .map(|i| r[(i, j)].abs_sqr())
                .fold(T::Real::zero(), |x, y| x + y);
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..n {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, best)];
                r[(i, best)] = t;
            }
            piv.swap(k, best);
        }
        let x: Vec<T> = (k..n).map(|i| r[(i, k)]).collect();
        if let Some((v, beta, _)) = householder(&x) {
            reflect_left(&mut r, &v, beta, k, k);
            reflect_right(&mut q, &v, beta, k, 0);
        }
        for i in k + 1..n {
            r[(i, k)] = T::zero();
        }
    }
    (q, r, piv)
}

/// Numerical rank from a pivoted QR: how many |r_ii| exceed `tol`.
pub fn rank_from_pivoted_r<T: Scalar>(r: &Matrix<T>, tol: T::Real) -> usize {
    (0..r.rows().min(r.cols()))
        .take_while(|&i| r[(i, i)].abs() > tol)
        .count()
}

/// Least-squares solve of the tall full-rank system `a x = b` via QR.
pub fn qr_least_squares<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.rows() < a.cols() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "least squares {}x{} with rhs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (q, r) = qr_decompose(a);
    let n = a.cols();
    let qtb = &q.conj_transpose() * b;
    let mut x = qtb.block(0, n, 0, b.cols());
    // back substitution on the leading n x n block of R
    for i in (0..n).rev() {
        let d = r[(i, i)];
        if d.abs() == T::Real::zero() {
            return Err(Error::SingularMatrix {
                pivot: 0.0,
                threshold: 0.0,
            });
        }
        for j in 0..x.cols() {
            let mut s = x[(i, j)];
            for c in i + 1..n {
                s -= r[(i, c)] * x[(c, j)];
            }
            x[(i, j)] = s / d;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{randn_matrix, rng};
    use crate::C64;

    #[test]
    fn identity_factors_as_identity() {
        let i2 = Matrix::<C64>::identity(2);
        let (q, r) = qr_decompose(&i2);
        assert!((&q - &i2).frob_norm() < 1e-15);
        assert!((&r - &i2).frob_norm() < 1e-15);
    }

    #[test]
    fn permutation_input_gives_nonnegative_diag() {
        let a = Matrix::from_rows(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let (q, r) = qr_decompose(&a);
        for i in 0..2 {
            assert!(r[(i, i)].im.abs() < 1e-15);
            assert!(r[(i, i)].re >= 0.0);
        }
        let resid = (&(&q * &r) - &a).frob_norm();
        assert!(resid < 1e-14);
    }

    #[test]
    fn random_orthogonality_and_residual() {
        let mut rr = rng(3);
        let a = randn_matrix(6, 6, &mut rr);
        let (q, r) = qr_decompose(&a);
        let qhq = &q.conj_transpose() * &q;
        let orth = (&qhq - &Matrix::identity(6)).frob_norm();
        assert!(orth < 1e-13, "orthogonality {orth:e}");
        let resid = (&(&q * &r) - &a).frob_norm();
        assert!(resid <= 1e-12 * 6.0 * a.frob_norm());
        // R upper triangular with non-negative real diagonal
        for i in 0..6 {
            assert!(r[(i, i)].im.abs() < 1e-13 && r[(i, i)].re >= 0.0);
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pivoted_rank_detects_deficiency() {
        let mut rr = rng(9);
        // rank-2 4x4: outer product of two random 4x2 factors
        let u = randn_matrix(4, 2, &mut rr);
        let v = randn_matrix(2, 4, &mut rr);
        let a = &u * &v;
        let (_, r, _) = qr_pivoted(&a);
        let tol = 1e-10 * a.frob_norm();
        assert_eq!(rank_from_pivoted_r(&r, tol), 2);
    }

    #[test]
    fn least_squares_consistent_system() {
        let mut rr = rng(11);
        let a = randn_matrix(7, 3, &mut rr);
        let x0 = randn_matrix(3, 2, &mut rr);
        let b = &a * &x0;
        let x = qr_least_squares(&a, &b).unwrap();
        assert!((&x - &x0).frob_norm() / x0.frob_norm() < 1e-12);
    }
}
