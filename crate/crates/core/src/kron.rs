//! Brute-force Kronecker-vectorization oracle for both equations. Slow on
//! purpose; capped at small sizes and meant for tests and acceptance runs.


use crate::error::{Error, Result};
use crate::lu::lu_solve;
use crate::matrix::{Matrix, StarOp};
use crate::scalar::Scalar;

/// Hard cap on the matrix dimension the oracle accepts.
pub const ORACLE_CAP: usize = 12;

fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_CAP {
        Err(Error::OracleTooLarge(n, ORACLE_CAP))
    } else {
        Ok(())
    }
}

/// Column-stacking vec: vec(X)[j*rows + i] = X[i, j].
fn vec_of<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    let (m, n) = (x.rows(), x.cols());
    Matrix::from_fn(m * n, 1, |k, _| x[(k % m, k / m)])
}

fn unvec<T: Scalar>(v: &Matrix<T>, rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |i, j| v[(j * rows + i, 0)])
}

/// Kronecker product `a (x) b`.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    Matrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// The vec-permutation (commutation) matrix: `Pi vec(X) = vec(X^T)` for all
/// n x n matrices X; an involution.
pub fn commutation_matrix<T: Scalar>(n: usize) -> Matrix<T> {
    let mut p = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(j * n + i, i * n + j)] = T::one();
        }
    }
    p
}

/// Solve `A X + X B = C` as the flat system `(I (x) A + B^T (x) I) vec X = vec C`.
pub fn solve_std_kron<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<Matrix<T>> {
    let (m, n) = (a.rows(), b.rows());
    check_cap(m.max(n))?;
    if !a.is_square() || !b.is_square() || c.rows() != m || c.cols() != n {
        return Err(Error::DimensionMismatch("kron std operands".into()));
    }
    let op = kron(&Matrix::identity(n), a).try_add(&kron(&b.transpose(), &Matrix::identity(m)))?;
    let x = lu_solve(&op, &vec_of(c)).map_err(|_| Error::SingularOperator)?;
    Ok(unvec(&x, m, n))
}

/// Solve `A X + X^star B = C` by vectorization. The transpose case stays
/// complex-linear; the conjugate-transpose case is assembled as a real-split
/// system of doubled dimension because conjugation is only real-linear.
pub fn solve_star_kron<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    star: StarOp,
) -> Result<Matrix<T>> {
    let n = a.rows();
    check_cap(n)?;
    if !a.is_square() || !b.is_square() || !c.is_square() || b.rows() != n || c.rows() != n {
        return Err(Error::DimensionMismatch("kron star operands".into()));
    }
    match star {
        StarOp::Transpose => {
            let pi = commutation_matrix::<T>(n);
            let op = kron(&Matrix::identity(n), a)
                .try_add(&kron(&b.transpose(), &Matrix::identity(n)).try_mul(&pi)?)?;
            let x = lu_solve(&op, &vec_of(c)).map_err(|_| Error::SingularOperator)?;
            Ok(unvec(&x, n, n))
        }
        StarOp::ConjTranspose => {
            let re = |m: &Matrix<T>| m.map(|z| T::from_real(z.re()));
            let im = |m: &Matrix<T>| m.map(|z| T::from_real(z.im()));
            let (ar, ai) = (re(a), im(a));
            let (br, bi) = (re(b), im(b));
            let id = Matrix::<T>::identity(n);
            let pi = commutation_matrix::<T>(n);
            let ia_r = kron(&id, &ar);
            let ia_i = kron(&id, &ai);
            let tb_r = kron(&br.transpose(), &id).try_mul(&pi)?;
            let tb_i = kron(&bi.transpose(), &id).try_mul(&pi)?;
            // blocks acting on (vec Re X, vec Im X)
            let m11 = ia_r.try_add(&tb_r)?;
            let m12 = tb_i.try_sub(&ia_i)?;
            let m21 = ia_i.try_add(&tb_i)?;
            let m22 = ia_r.try_sub(&tb_r)?;
            let nn = n * n;
            let mut op = Matrix::zeros(2 * nn, 2 * nn);
            op.set_block(0, 0, &m11);
            op.set_block(0, nn, &m12);
            op.set_block(nn, 0, &m21);
            op.set_block(nn, nn, &m22);
            let mut rhs = Matrix::zeros(2 * nn, 1);
            rhs.set_block(0, 0, &vec_of(&re(c)));
            rhs.set_block(nn, 0, &vec_of(&im(c)));
            let sol = lu_solve(&op, &rhs).map_err(|_| Error::SingularOperator)?;
            let xr = unvec(&sol.block(0, nn, 0, 1), n, n);
            let xi = unvec(&sol.block(nn, 2 * nn, 0, 1), n, n);
            Ok(Matrix::from_fn(n, n, |i, j| {
                T::from_parts(xr[(i, j)].re(), xi[(i, j)].re())
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{randn_matrix, rng, stabilizing_triple};
    use crate::C64;

    fn m1(x: f64) -> Matrix<C64> {
        Matrix::from_rows(1, 1, &[C64::new(x, 0.0)]).unwrap()
    }

    #[test]
    fn commutation_is_involution_and_transposes() {
        let mut r = rng(19);
        let x = randn_matrix(4, 4, &mut r);
        let pi = commutation_matrix::<C64>(4);
        let lhs = &pi * &vec_of(&x);
        let rhs = vec_of(&x.transpose());
        assert!((&lhs - &rhs).frob_norm() == 0.0);
        let pi2 = &pi * &pi;
        assert!((&pi2 - &Matrix::identity(16)).frob_norm() == 0.0);
    }

    #[test]
    fn commutation_n1_and_n2() {
        let p1 = commutation_matrix::<C64>(1);
        assert_eq!(p1, Matrix::identity(1));
        let p2 = commutation_matrix::<C64>(2);
        // swaps the middle two coordinates
        let want = Matrix::from_fn(4, 4, |i, j| {
            let v = match (i, j) {
                (0, 0) | (3, 3) | (1, 2) | (2, 1) => 1.0,
                _ => 0.0,
            };
            C64::new(v, 0.0)
        });
        assert_eq!(p2, want);
    }

    #[test]
    fn std_scalar_and_zero() {
        let x = solve_std_kron(&m1(1.0), &m1(1.0), &m1(2.0)).unwrap();
        assert!((x[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        let mut r = rng(20);
        let a = randn_matrix(3, 3, &mut r);
        let b = randn_matrix(2, 2, &mut r);
        let x = solve_std_kron(&a, &b, &Matrix::zeros(3, 2)).unwrap();
        assert!(x.frob_norm() < 1e-12);
    }

    #[test]
    fn star_scalar_transpose() {
        let x = solve_star_kron(&m1(1.0), &m1(2.0), &m1(3.0), StarOp::Transpose).unwrap();
        assert!((x[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn star_hermitian_unimodular_is_singular() {
        let got = solve_star_kron(&m1(1.0), &m1(1.0), &m1(1.0), StarOp::ConjTranspose);
        assert!(matches!(got, Err(Error::SingularOperator)));
    }

    #[test]
    fn star_hermitian_residual() {
        let mut r = rng(21);
        let (a, b, c, _x) = stabilizing_triple(5, 0.6, StarOp::ConjTranspose, &mut r);
        let x = solve_star_kron(&a, &b, &c, StarOp::ConjTranspose).unwrap();
        let resid = a
            .try_mul(&x)
            .unwrap()
            .try_add(&x.conj_transpose().try_mul(&b).unwrap())
            .unwrap()
            .try_sub(&c)
            .unwrap()
            .frob_norm();
        let scale = (a.frob_norm() + b.frob_norm()) * x.frob_norm() + c.frob_norm();
        assert!(resid <= 1e-11 * scale, "resid {resid:e} scale {scale:e}");
    }

    #[test]
    fn transpose_and_hermitian_agree_on_real_input() {
        let mut r = rng(22);
        let re = |m: &Matrix<C64>| m.map(|z| C64::new(z.re, 0.0));
        let (a, b, c, _x) = stabilizing_triple(4, 0.5, StarOp::Transpose, &mut r);
        let (a, b) = (re(&a), re(&b));
        let c = re(&c);
        let xt = solve_star_kron(&a, &b, &c, StarOp::Transpose).unwrap();
        let xh = solve_star_kron(&a, &b, &c, StarOp::ConjTranspose).unwrap();
        assert!((&xt - &xh).frob_norm() <= 1e-11 * xt.frob_norm().max(1.0));
    }

    #[test]
    fn cap_is_enforced() {
        let a = Matrix::<C64>::identity(13);
        assert!(matches!(
            solve_std_kron(&a, &a, &a),
            Err(Error::OracleTooLarge(13, _))
        ));
    }
}
