//! Standard Sylvester equation `A X + X B = C` solved through the invariant
//! subspace of the block matrix `M = [[-A, C], [0, B]]`.

use num_traits::{Float, One};
use crate::error::{Error, Result};
use crate::lu::{cond_estimate, lu_solve};
use crate::matrix::Matrix;
use crate::pencil::check_std_solvability;
use crate::scalar::{Real, Scalar};
use crate::schur::{eigenvalues, reorder_schur_mask, schur_decompose};

/// The embedding `M = [[-A, C], [0, B]]` with its block dimensions.
#[derive(Clone, Debug)]
pub struct BlockM<T: Scalar> {
    pub m: Matrix<T>,
    pub dims: (usize, usize),
}

/// Assemble the block matrix of the invariant-subspace method.
pub fn build_block_m<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<BlockM<T>> {
    let (m, n) = (a.rows(), b.rows());
    if !a.is_square() || !b.is_square() || c.rows() != m || c.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "block M from A {}x{}, B {}x{}, C {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let mut block = Matrix::zeros(m + n, m + n);
    block.set_block(0, 0, &-a);
    block.set_block(0, m, c);
    block.set_block(m, m, b);
    Ok(BlockM {
        m: block,
        dims: (m, n),
    })
}

/// Greedy nearest-neighbour matching of `targets` into `pool`; returns the
/// selected pool indices (ties broken by index order).
pub(crate) fn greedy_match<T: Scalar>(pool: &[T], targets: &[T]) -> Vec<usize> {
    let mut used = vec![false; pool.len()];
    let mut picked = Vec::with_capacity(targets.len());
    for t in targets {
        let mut best = usize::MAX;
        let mut best_d = T::Real::infinity();
        for (i, p) in pool.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (*p - *t).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        used[best] = true;
        picked.push(best);
    }
    picked
}

/// Solve `A X + X B = C` by reordering the Schur form of M so that the
/// leading invariant subspace carries sigma(B), then `X = U V^{-1}`.
pub fn solve_sylvester_invariant<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<Matrix<T>> {
    let (ok, witness) = check_std_solvability(a, b, T::Real::of(1e-10))?;
    if !ok {
        let (la, lb) = witness.unwrap();
        return Err(Error::NotUniquelySolvable(format!(
            " (sigma(-A) meets sigma(B) near {la} / {lb})"
        )));
    }
    let (m, n) = (a.rows(), b.rows());
    let block = build_block_m(a, b, c)?;
    let schur = schur_decompose(&block.m)?;
    let eig_b = eigenvalues(b)?;
    let pool = schur.t.diag();
    let picked = greedy_match(&pool, &eig_b);
    let mut mask = vec![false; m + n];
    for i in picked {
        mask[i] = true;
    }
    let ordered = reorder_schur_mask(&schur, &mask)?;
    let u = ordered.q.block(0, m, 0, n);
    let v = ordered.q.block(m, m + n, 0, n);
    let bound = T::Real::one() / (T::Real::of(n as f64) * T::Real::unit_roundoff().sqrt());
    match cond_estimate(&v) {
        Some(cv) if cv <= bound => {}
        _ => return Err(Error::VSingular),
    }
    // X = U V^{-1}  <=>  V^T X^T = U^T
    let xt = lu_solve(&v.transpose(), &u.transpose())?;
    Ok(xt.transpose())
}
