//! Spectra of matrix pencils A - lambda B and the solvability classifiers
//! built on them.

use num_traits::{Float, One, Zero};
use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::matrix::{Matrix, StarOp};
use crate::qr::{qr_pivoted, rank_from_pivoted_r};
use crate::scalar::{Real, Scalar};
use crate::schur::eigenvalues;

/// A generalized eigenvalue as a projective pair (alpha, beta); the value is
/// alpha/beta and beta = 0 encodes infinity. Normalized to unit length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveEig<T: Scalar> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> ProjectiveEig<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        let norm = (alpha.abs_sqr() + beta.abs_sqr()).sqrt();
        assert!(norm > T::Real::zero(), "projective pair (0, 0)");
        let inv = T::from_real(T::Real::one() / norm);
        ProjectiveEig {
            alpha: alpha * inv,
            beta: beta * inv,
        }
    }

    /// Finite eigenvalue from lambda itself.
    pub fn finite(lambda: T) -> Self {
        Self::new(lambda, T::one())
    }

    pub fn infinity() -> Self {
        ProjectiveEig {
            alpha: T::one(),
            beta: T::zero(),
        }
    }

    pub fn is_infinite(&self, tol: T::Real) -> bool {
        self.beta.abs() <= tol
    }

    /// The finite value alpha/beta; meaningless when beta ~ 0.
    pub fn value(&self) -> T {
        self.alpha / self.beta
    }

    /// |lambda| in projective form: |alpha| / |beta| (infinity-safe compare
    /// is done by the callers against |beta| scaled bounds).
    pub fn modulus(&self) -> T::Real {
        self.alpha.abs() / self.beta.abs()
    }

    /// Projective swap alpha <-> beta, i.e. the reciprocal eigenvalue.
    pub fn reciprocal(&self) -> Self {
        ProjectiveEig {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

/// The spectrum of a regular pencil as projective pairs.
#[derive(Clone, Debug)]
pub struct PencilSpectrum<T: Scalar> {
    pub eigs: Vec<ProjectiveEig<T>>,
}

impl<T: Scalar> PencilSpectrum<T> {
    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }
}

/// Verdict of the star-Sylvester solvability test (Theorem-4.1-style).
#[derive(Clone, Debug, PartialEq)]
pub enum SolvabilityVerdict<T: Scalar> {
    UniquelySolvable,
    /// Transpose case only: 1 is in the spectrum but simple.
    CriticalSimpleOne,
    NotUniquelySolvable {
        witness: Option<(ProjectiveEig<T>, ProjectiveEig<T>)>,
    },
}

impl<T: Scalar> SolvabilityVerdict<T> {
    pub fn is_solvable(&self) -> bool {
        !matches!(self, SolvabilityVerdict::NotUniquelySolvable { .. })
    }
}

fn invertible_enough<T: Scalar>(m: &Matrix<T>) -> Option<Lu<T>> {
    let n = m.rows();
    let bound = T::Real::one() / (T::Real::of(n as f64) * T::Real::unit_roundoff().sqrt());
    match Lu::factor(m) {
        Ok(f) => match f.cond_estimate() {
            Ok(c) if c <= bound => Some(f),
            _ => None,
        },
        Err(_) => None,
    }
}

/// Generalized eigenvalues of the pencil `a - lambda b`.
///
/// Reduces to a standard eigenproblem through whichever of b, a, or a Moebius
/// shift `a - mu b` is comfortably invertible; reports `SingularPencil` when
/// three shifts in a row fail.
pub fn pencil_eigenvalues<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<PencilSpectrum<T>> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "pencil of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if let Some(f) = invertible_enough(b) {
        // lambda solves det(b^-1 a - lambda I) = 0
        let eigs = eigenvalues(&f.solve(a)?)?;
        return Ok(PencilSpectrum {
            eigs: eigs.into_iter().map(ProjectiveEig::finite).collect(),
        });
    }
    if let Some(f) = invertible_enough(a) {
        // mu = 1/lambda solves det(a^-1 b - mu I) = 0
        let eigs = eigenvalues(&f.solve(b)?)?;
        return Ok(PencilSpectrum {
            eigs: eigs
                .into_iter()
                .map(|mu| ProjectiveEig::new(T::one(), mu))
                .collect(),
        });
    }
    // Moebius shifts on the unit circle, fixed deterministic phases
    for phase in [0.381966, 0.739085, 0.214601] {
        let angle = T::Real::of(phase * std::f64::consts::TAU);
        let mu = T::from_parts(angle.cos(), angle.sin());
        let shifted = a.try_sub(&b.scale(mu))?;
        if let Some(f) = invertible_enough(&shifted) {
            // eta solves det((a - mu b)^-1 b - eta I) = 0; lambda = mu + 1/eta
            let eigs = eigenvalues(&f.solve(b)?)?;
            return Ok(PencilSpectrum {
                eigs: eigs
                    .into_iter()
                    .map(|eta| ProjectiveEig::new(mu * eta + T::one(), eta))
                    .collect(),
            });
        }
    }
    Err(Error::SingularPencil)
}

/// True iff no pair (i, j), including i = j, satisfies
/// `lambda_i * star(lambda_j) = 1` within `tol`, in projective form
/// `|alpha_i star(alpha_j) - beta_i star(beta_j)| <= tol`. Returns the first
/// violating pair as a witness.
pub fn is_reciprocal_free<T: Scalar>(
    s: &PencilSpectrum<T>,
    star: StarOp,
    tol: T::Real,
) -> (bool, Option<(ProjectiveEig<T>, ProjectiveEig<T>)>) {
    for (i, ei) in s.eigs.iter().enumerate() {
        for ej in &s.eigs[i..] {
            let lhs = ei.alpha * star.apply(ej.alpha) - ei.beta * star.apply(ej.beta);
            if lhs.abs() <= tol {
                return (false, Some((*ei, *ej)));
            }
        }
    }
    (true, None)
}

/// Distance of a projective eigenvalue from the point 1 (for clustering the
/// critical eigenvalue of the transpose case).
fn dist_to_one<T: Scalar>(e: &ProjectiveEig<T>) -> T::Real {
    // |alpha - beta| on the normalized pair is a scale-free proxy for
    // |lambda - 1| near 1.
    (e.alpha - e.beta).abs()
}

/// Classify unique solvability of `a x + x^star b = c` from the spectrum of
/// `a^star - lambda b`.
pub fn classify_star_solvability<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    star: StarOp,
    tol: T::Real,
) -> Result<SolvabilityVerdict<T>> {
    let spec = pencil_eigenvalues(&a.star(star), b)?;
    match star {
        StarOp::Transpose => {
            let cluster_tol = T::Real::of(1e-8);
            let (ones, rest): (Vec<_>, Vec<_>) = spec
                .eigs
                .iter()
                .copied()
                .partition(|e| dist_to_one(e) <= cluster_tol);
            if ones.len() > 1 {
                return Ok(SolvabilityVerdict::NotUniquelySolvable {
                    witness: Some((ones[0], ones[1])),
                });
            }
            let rest_spec = PencilSpectrum { eigs: rest };
            let (free, witness) = is_reciprocal_free(&rest_spec, star, tol);
            if !free {
                return Ok(SolvabilityVerdict::NotUniquelySolvable { witness });
            }
            if ones.len() == 1 {
                Ok(SolvabilityVerdict::CriticalSimpleOne)
            } else {
                Ok(SolvabilityVerdict::UniquelySolvable)
            }
        }
        StarOp::ConjTranspose => {
            let circle_tol = T::Real::of(1e-10);
            for e in &spec.eigs {
                if (e.alpha.abs() - e.beta.abs()).abs() <= circle_tol {
                    return Ok(SolvabilityVerdict::NotUniquelySolvable {
                        witness: Some((*e, *e)),
                    });
                }
            }
            let (free, witness) = is_reciprocal_free(&spec, star, tol);
            if free {
                Ok(SolvabilityVerdict::UniquelySolvable)
            } else {
                Ok(SolvabilityVerdict::NotUniquelySolvable { witness })
            }
        }
    }
}

/// Theorem-3.1-style test for the standard equation: true iff
/// `sigma(-a)` and `sigma(b)` are separated by more than
/// `tol * (1 + max magnitude)`.
pub fn check_std_solvability<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: T::Real,
) -> Result<(bool, Option<(T, T)>)> {
    let ea = eigenvalues(a)?;
    let eb = eigenvalues(b)?;
    let mag = ea
        .iter()
        .chain(eb.iter())
        .map(|l| l.abs())
        .fold(T::Real::zero(), |x, y| if y > x { y } else { x });
    let bound = tol * (T::Real::one() + mag);
    for la in &ea {
        for lb in &eb {
            if (-*la - *lb).abs() <= bound {
                return Ok((false, Some((*la, *lb))));
            }
        }
    }
    Ok((true, None))
}

/// True iff every eigenvalue of `a^star - lambda b` lies strictly inside the
/// unit circle: `|alpha| < (1 - tol) |beta|` projectively.
pub fn is_stabilizing_pencil<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    star: StarOp,
    tol: T::Real,
) -> Result<bool> {
    let spec = pencil_eigenvalues(&a.star(star), b)?;
    Ok(spec
        .eigs
        .iter()
        .all(|e| e.alpha.abs() < (T::Real::one() - tol) * e.beta.abs()))
}

/// `n - rank`, with rank counted from a column-pivoted QR as the number of
/// diagonal entries exceeding `tol * ||m||_F`.
pub fn numerical_nullity<T: Scalar>(m: &Matrix<T>, tol: T::Real) -> usize {
    let n = m.rows();
    let scale = m.frob_norm();
    if scale == T::Real::zero() {
        return n;
    }
    let (_, r, _) = qr_pivoted(m);
    n - rank_from_pivoted_r(&r, tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{randn_matrix, rng};
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mat1(x: f64) -> Matrix<C64> {
        Matrix::from_rows(1, 1, &[c(x, 0.0)]).unwrap()
    }

    #[test]
    fn diagonal_pencil() {
        let a = Matrix::from_diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let b = Matrix::<C64>::identity(2);
        let s = pencil_eigenvalues(&a, &b).unwrap();
        let mut vals: Vec<f64> = s.eigs.iter().map(|e| e.value().re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 2.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_eigenvalue_branch() {
        let a = Matrix::<C64>::identity(2);
        let b = Matrix::from_diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = pencil_eigenvalues(&a, &b).unwrap();
        let tol = 1e-10;
        let n_inf = s.eigs.iter().filter(|e| e.is_infinite(tol)).count();
        assert_eq!(n_inf, 1);
        let finite = s.eigs.iter().find(|e| !e.is_infinite(tol)).unwrap();
        assert!((finite.value() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn singular_pencil_detected() {
        // det(a - lambda b) == 0 identically: shared null column
        let a = Matrix::from_rows(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let b = Matrix::from_rows(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(
            pencil_eigenvalues(&a, &b),
            Err(Error::SingularPencil)
        ));
    }

    #[test]
    fn reciprocal_free_basics() {
        let spec = PencilSpectrum {
            eigs: vec![
                ProjectiveEig::finite(c(0.5, 0.0)),
                ProjectiveEig::finite(c(0.3, 0.0)),
            ],
        };
        assert!(is_reciprocal_free(&spec, StarOp::Transpose, 1e-8).0);

        let spec2 = PencilSpectrum {
            eigs: vec![
                ProjectiveEig::finite(c(2.0, 0.0)),
                ProjectiveEig::finite(c(0.5, 0.0)),
            ],
        };
        let (free, w) = is_reciprocal_free(&spec2, StarOp::Transpose, 1e-8);
        assert!(!free);
        let (wi, wj) = w.unwrap();
        assert!((wi.value() - c(2.0, 0.0)).norm() < 1e-12);
        assert!((wj.value() - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_and_infinity_are_reciprocal() {
        let spec = PencilSpectrum {
            eigs: vec![ProjectiveEig::finite(c(0.0, 0.0)), ProjectiveEig::infinity()],
        };
        assert!(!is_reciprocal_free(&spec, StarOp::Transpose, 1e-8).0);
        assert!(!is_reciprocal_free(&spec, StarOp::ConjTranspose, 1e-8).0);
    }

    #[test]
    fn classify_scalar_cases() {
        let v = classify_star_solvability(&mat1(1.0), &mat1(2.0), StarOp::Transpose, 1e-8).unwrap();
        assert_eq!(v, SolvabilityVerdict::UniquelySolvable);

        let v = classify_star_solvability(&mat1(1.0), &mat1(1.0), StarOp::Transpose, 1e-8).unwrap();
        assert_eq!(v, SolvabilityVerdict::CriticalSimpleOne);

        let v =
            classify_star_solvability(&mat1(1.0), &mat1(1.0), StarOp::ConjTranspose, 1e-8).unwrap();
        assert!(!v.is_solvable());
    }

    #[test]
    fn std_solvability_cases() {
        let i = Matrix::<C64>::identity(2);
        let (ok, _) = check_std_solvability(&i, &i, 1e-8).unwrap();
        assert!(ok);
        let (bad, w) = check_std_solvability(&(-&i), &i, 1e-8).unwrap();
        assert!(!bad && w.is_some());
    }

    #[test]
    fn stabilizing_pencil_cases() {
        let z = Matrix::<C64>::zeros(2, 2);
        let i = Matrix::<C64>::identity(2);
        assert!(is_stabilizing_pencil(&z, &i, StarOp::Transpose, 1e-10).unwrap());
        assert!(!is_stabilizing_pencil(&i, &i, StarOp::Transpose, 1e-10).unwrap());
    }

    #[test]
    fn nullity_cases() {
        let z = Matrix::<C64>::zeros(3, 3);
        assert_eq!(numerical_nullity(&z, 1e-10), 3);
        assert_eq!(numerical_nullity(&Matrix::<C64>::identity(3), 1e-10), 0);
    }

    #[test]
    fn pencil_vs_plain_eigs_and_reciprocal_swap() {
        let mut r = rng(13);
        let a = randn_matrix(5, 5, &mut r);
        let b = randn_matrix(5, 5, &mut r);
        let s_ab = pencil_eigenvalues(&a, &b).unwrap();
        let s_ba = pencil_eigenvalues(&b, &a).unwrap();
        // each eigenvalue of (a, b) has a reciprocal partner in (b, a)
        for e in &s_ab.eigs {
            let target = e.reciprocal();
            let best = s_ba
                .eigs
                .iter()
                .map(|f| (f.alpha * target.beta - f.beta * target.alpha).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "no reciprocal partner: {best:e}");
        }
    }
}
