//! Companion linearization of matrix polynomials and the embedding residual
//! `|| M U - L U X ||_F`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A matrix polynomial `A_m X^m + ... + A_1 X + A_0` given by its
/// coefficients in ascending degree order.
#[derive(Clone, Debug)]
pub struct MatrixPolynomial<T: Scalar> {
    coeffs: Vec<Matrix<T>>,
    n: usize,
}

impl<T: Scalar> MatrixPolynomial<T> {
    /// Coefficients `[A0, ..., A_m]`, all n x n, degree m >= 1.
    pub fn new(coeffs: Vec<Matrix<T>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DimensionMismatch(
                "matrix polynomial needs degree >= 1".into(),
            ));
        }
        let n = coeffs[0].rows();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_square() || c.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient {i} is {}x{}, expected {n}x{n}",
                    c.rows(),
                    c.cols()
                )));
            }
        }
        Ok(MatrixPolynomial { coeffs, n })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize) -> &Matrix<T> {
        &self.coeffs[i]
    }

    /// Evaluate `sum A_i X^i` at a square matrix argument.
    pub fn eval(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if !x.is_square() || x.rows() != self.n {
            return Err(Error::DimensionMismatch("polynomial argument".into()));
        }
        let mut acc = self.coeffs[0].clone();
        let mut power = Matrix::identity(self.n);
        for a_i in &self.coeffs[1..] {
            power = power.try_mul(x)?;
            acc = acc.try_add(&a_i.try_mul(&power)?)?;
        }
        Ok(acc)
    }
}

/// The companion pencil `M - lambda L` of the polynomial: shift structure on
/// top, `-A_0 ... -A_{m-1}` in the last block row, `L = diag(I, .., I, A_m)`.
pub fn build_companion<T: Scalar>(p: &MatrixPolynomial<T>) -> (Matrix<T>, Matrix<T>) {
    let (n, m) = (p.dim(), p.degree());
    let mut big_m = Matrix::zeros(m * n, m * n);
    let id = Matrix::identity(n);
    for blk in 0..m - 1 {
        big_m.set_block(blk * n, (blk + 1) * n, &id);
    }
    for blk in 0..m {
        big_m.set_block((m - 1) * n, blk * n, &-p.coeff(blk));
    }
    let mut big_l = Matrix::identity(m * n);
    big_l.set_block((m - 1) * n, (m - 1) * n, p.coeff(m));
    (big_m, big_l)
}

/// Residual of the embedding identity at a candidate solvent x:
/// `|| M U - L U x ||_F` with `U = [I; x; ...; x^{m-1}]`.
pub fn companion_residual<T: Scalar>(p: &MatrixPolynomial<T>, x: &Matrix<T>) -> Result<<T as Scalar>::Real> {
    if !x.is_square() || x.rows() != p.dim() {
        return Err(Error::DimensionMismatch("solvent dimension".into()));
    }
    let (n, m) = (p.dim(), p.degree());
    let (big_m, big_l) = build_companion(p);
    let mut u = Matrix::zeros(m * n, n);
    let mut power = Matrix::identity(n);
    for blk in 0..m {
        u.set_block(blk * n, 0, &power);
        power = power.try_mul(x)?;
    }
    let lhs = big_m.try_mul(&u)?;
    let rhs = big_l.try_mul(&u)?.try_mul(x)?;
    Ok(lhs.try_sub(&rhs)?.frob_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::eigenvalues;
    use crate::test_support::{assert_multiset_close, randn_matrix, rng};
    use crate::C64;

    fn m1(x: f64) -> Matrix<C64> {
        Matrix::from_rows(1, 1, &[C64::new(x, 0.0)]).unwrap()
    }

    #[test]
    fn degree_one_collapse() {
        let p = MatrixPolynomial::new(vec![m1(3.0), m1(2.0)]).unwrap();
        let (m, l) = build_companion(&p);
        assert_eq!(m, m1(-3.0));
        assert_eq!(l, m1(2.0));
    }

    #[test]
    fn scalar_quadratic_layout() {
        // x^2 + 1: M = [[0, 1], [-1, 0]], L = I
        let p = MatrixPolynomial::new(vec![m1(1.0), m1(0.0), m1(1.0)]).unwrap();
        let (m, l) = build_companion(&p);
        let want = Matrix::from_rows(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(m, want);
        assert_eq!(l, Matrix::identity(2));
    }

    #[test]
    fn residual_zero_at_scalar_root() {
        // x^2 - 1 = 0 at x = 1
        let p = MatrixPolynomial::new(vec![m1(-1.0), m1(0.0), m1(1.0)]).unwrap();
        assert!(companion_residual(&p, &m1(1.0)).unwrap() < 1e-15);
    }

    #[test]
    fn residual_at_zero_is_norm_a0() {
        let mut r = rng(2);
        let a0 = randn_matrix(3, 3, &mut r);
        let a1 = randn_matrix(3, 3, &mut r);
        let a2 = randn_matrix(3, 3, &mut r);
        let p = MatrixPolynomial::new(vec![a0.clone(), a1, a2]).unwrap();
        let x0 = Matrix::<C64>::zeros(3, 3);
        let resid = companion_residual(&p, &x0).unwrap();
        assert!((resid - a0.frob_norm()).abs() < 1e-12);
    }

    #[test]
    fn planted_solvent_residual_tiny() {
        let mut r = rng(3);
        for _ in 0..5 {
            let n = 3;
            let x0 = randn_matrix(n, n, &mut r);
            let a1 = randn_matrix(n, n, &mut r);
            let a2 = randn_matrix(n, n, &mut r);
            let a3 = randn_matrix(n, n, &mut r);
            // choose A0 so that x0 is an exact solvent
            let x2 = x0.try_mul(&x0).unwrap();
            let x3 = x2.try_mul(&x0).unwrap();
            let a0 = -&a1
                .try_mul(&x0)
                .unwrap()
                .try_add(&a2.try_mul(&x2).unwrap())
                .unwrap()
                .try_add(&a3.try_mul(&x3).unwrap())
                .unwrap();
            let p = MatrixPolynomial::new(vec![a0, a1, a2, a3]).unwrap();
            let resid = companion_residual(&p, &x0).unwrap();
            let scale: f64 = (0..=3).map(|i| p.coeff(i).frob_norm()).sum();
            assert!(resid <= 1e-11 * scale.max(1.0), "residual {resid:e}");
            // and the residual is consistent with the direct evaluation
            let direct = p.eval(&x0).unwrap().frob_norm();
            assert!(direct <= 1e-11 * scale.max(1.0));
        }
    }

    #[test]
    fn pencil_spectrum_is_solvent_independent() {
        let mut r = rng(4);
        let n = 2;
        let coeffs: Vec<_> = (0..4).map(|_| randn_matrix(n, n, &mut r)).collect();
        let p = MatrixPolynomial::new(coeffs).unwrap();
        let (m, l) = build_companion(&p);
        // compare sigma(M - lambda L) against the scalarized determinant roots
        // via the reduction eig(L^-1 M): valid here because L is generically
        // invertible
        let linv_m = crate::lu::lu_solve(&l, &m).unwrap();
        let got = eigenvalues(&linv_m).unwrap();
        // oracle: determinant interpolation on a scaled circle grid
        let poly_eigs = polyeig_oracle(&p);
        assert_multiset_close(&got, &poly_eigs, 1e-6);
    }

    // determinant-interpolation oracle: evaluate det(sum A_i z^i) on a circle,
    // interpolate the coefficient polynomial, take companion-matrix roots
    fn polyeig_oracle(p: &MatrixPolynomial<C64>) -> Vec<C64> {
        let n = p.dim();
        let m = p.degree();
        let deg = m * n;
        let npts = deg + 1;
        let radius = 1.3;
        let mut vals = Vec::with_capacity(npts);
        for k in 0..npts {
            let ang = std::f64::consts::TAU * (k as f64) / (npts as f64);
            let z = C64::new(radius * ang.cos(), radius * ang.sin());
            let mut acc = Matrix::<C64>::zeros(n, n);
            let mut zp = C64::new(1.0, 0.0);
            for i in 0..=m {
                acc = acc.try_add(&p.coeff(i).scale(zp)).unwrap();
                zp *= z;
            }
            vals.push(det(&acc));
        }
        // inverse DFT for coefficients of det polynomial on the circle
        let mut coeffs = vec![C64::new(0.0, 0.0); npts];
        for (j, cj) in coeffs.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (k, v) in vals.iter().enumerate() {
                let ang = -std::f64::consts::TAU * (j * k) as f64 / (npts as f64);
                s += *v * C64::new(ang.cos(), ang.sin());
            }
            *cj = s / C64::new(npts as f64, 0.0) / C64::new(radius, 0.0).powu(j as u32);
        }
        // companion matrix of the scalar polynomial
        let lead = coeffs[deg];
        let comp = Matrix::from_fn(deg, deg, |i, j| {
            if j == deg - 1 {
                -coeffs[i] / lead
            } else if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        eigenvalues(&comp).unwrap()
    }

    fn det(a: &Matrix<C64>) -> C64 {
        // small sizes only: Schur-free LU determinant with pivot sign
        let n = a.rows();
        let mut m = a.clone();
        let mut d = C64::new(1.0, 0.0);
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if m[(i, k)].norm() > m[(p, k)].norm() {
                    p = i;
                }
            }
            if m[(p, k)].norm() == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if p != k {
                for j in 0..n {
                    let t = m[(k, j)];
                    m[(k, j)] = m[(p, j)];
                    m[(p, j)] = t;
                }
                d = -d;
            }
            d *= m[(k, k)];
            for i in k + 1..n {
                let f = m[(i, k)] / m[(k, k)];
                for j in k..n {
                    let s = f * m[(k, j)];
                    m[(i, j)] -= s;
                }
            }
        }
        d
    }
}
