//! The star-Sylvester equation `A X + X^star B = C`: palindromic pencil
//! embedding, doubling iteration, and the deflating-subspace solver.

use num_traits::{Float, One, Zero};
use crate::error::{Error, Result};
use crate::lu::{cond_estimate, lu_solve, Lu};
use crate::matrix::{Matrix, StarOp};
use crate::pencil::{classify_star_solvability, pencil_eigenvalues, SolvabilityVerdict};
use crate::qr::{qr_least_squares, qr_pivoted, rank_from_pivoted_r};
use crate::scalar::{Real, Scalar};
use crate::schur::{reorder_schur_mask, schur_decompose};
use crate::sylvester::greedy_match;

/// The palindromic embedding `Z = [[0, B], [A, -C]]`.
#[derive(Clone, Debug)]
pub struct ZPencil<T: Scalar> {
    pub z: Matrix<T>,
    pub star: StarOp,
    pub n: usize,
}

/// Assemble the 2n x 2n palindromic pencil matrix.
pub fn build_z<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    star: StarOp,
) -> Result<ZPencil<T>> {
    let n = a.rows();
    for (name, m) in [("A", a), ("B", b), ("C", c)] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "Z pencil: {name} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let mut z = Matrix::zeros(2 * n, 2 * n);
    z.set_block(0, n, b);
    z.set_block(n, 0, a);
    z.set_block(n, n, &-c);
    Ok(ZPencil { z, star, n })
}

/// The Hermitian/skew split of Z under the active star:
/// `H0 = (Z^star + Z)/2`, `K = (Z - Z^star)/2`, stored blockwise.
#[derive(Clone, Debug)]
pub struct HkSplit<T: Scalar> {
    pub h12: Matrix<T>,
    pub h22: Matrix<T>,
    pub k12: Matrix<T>,
    pub k22: Matrix<T>,
    pub star: StarOp,
}

/// Blockwise split: h12 = (A^star + B)/2, h22 = (C^star + C)/2,
/// k12 = (-A^star + B)/2, k22 = (-C^star + C)/2.
pub fn split_hk<T: Scalar>(zp: &ZPencil<T>) -> HkSplit<T> {
    let n = zp.n;
    let b = zp.z.block(0, n, n, 2 * n);
    let a = zp.z.block(n, 2 * n, 0, n);
    let c = -&zp.z.block(n, 2 * n, n, 2 * n);
    let half = T::of(0.5);
    let astar = a.star(zp.star);
    let cstar = c.star(zp.star);
    HkSplit {
        h12: astar.try_add(&b).unwrap().scale(half),
        h22: cstar.try_add(&c).unwrap().scale(half),
        k12: b.try_sub(&astar).unwrap().scale(half),
        k22: c.try_sub(&cstar).unwrap().scale(half),
        star: zp.star,
    }
}

/// One doubling map `(A, B) -> (A (A+B)^-1 A, B (A+B)^-1 B)`; squares the
/// pencil eigenvalues while keeping deflating subspaces.
pub fn doubling_transform<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let sum = a.try_add(b)?;
    let f = Lu::factor(&sum).map_err(|_| Error::SingularSum)?;
    let a_hat = a.try_mul(&f.solve(a)?)?;
    let b_hat = b.try_mul(&f.solve(b)?)?;
    Ok((a_hat, b_hat))
}

/// Iterate state of the doubling algorithm: K blocks are constant, H blocks
/// evolve.
#[derive(Clone, Debug)]
pub struct PdaState<T: Scalar> {
    pub iter: usize,
    pub h12: Matrix<T>,
    pub h22: Matrix<T>,
    pub k12: Matrix<T>,
    pub k22: Matrix<T>,
    pub star: StarOp,
}

impl<T: Scalar> PdaState<T> {
    pub fn from_split(s: &HkSplit<T>) -> Self {
        PdaState {
            iter: 0,
            h12: s.h12.clone(),
            h22: s.h22.clone(),
            k12: s.k12.clone(),
            k22: s.k22.clone(),
            star: s.star,
        }
    }

    /// Anti-diagonal block Z12 = H12 + K12 of the implicit iterate Z_k.
    pub fn z12(&self) -> Matrix<T> {
        self.h12.try_add(&self.k12).unwrap()
    }

    /// Anti-diagonal block Z21 = (H12 - K12)^star.
    pub fn z21(&self) -> Matrix<T> {
        self.h12.try_sub(&self.k12).unwrap().star(self.star)
    }

    /// Corner block Z22 = H22 + K22.
    pub fn z22(&self) -> Matrix<T> {
        self.h22.try_add(&self.k22).unwrap()
    }

    /// The error metric of the iteration, `ERR = ||Z21||_F`.
    pub fn err(&self) -> T::Real {
        self.h12.try_sub(&self.k12).unwrap().frob_norm()
    }
}

/// One step of the doubling recursion on the H blocks.
pub fn pda_step<T: Scalar>(s: &PdaState<T>) -> Result<PdaState<T>> {
    let t = lu_solve(&s.h12, &s.k12).map_err(|_| Error::H12Singular)?;
    let t_star = t.star(s.star);
    let half = T::of(0.5);
    let h12 = s.h12.try_add(&s.k12.try_mul(&t)?)?.scale(half);
    let h22 = s
        .h22
        .try_add(&t_star.try_mul(&s.h22)?.try_mul(&t)?)?
        .try_add(&s.k22.try_mul(&t)?)?
        .try_sub(&t_star.try_mul(&s.k22)?)?
        .scale(half);
    Ok(PdaState {
        iter: s.iter + 1,
        h12,
        h22,
        k12: s.k12.clone(),
        k22: s.k22.clone(),
        star: s.star,
    })
}

/// Which linear system the solution recovery uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoverMode {
    /// `(Z12^k)^star X = (Z22^k)^star`, the displayed formula.
    Displayed,
    /// `(-A + B^star) X = (Z22^k)^star`, the fixed-coefficient variant.
    FixedCoefficient,
}

/// Recover the solution iterate `X_k = (Z12^k)^{-star} (Z22^k)^star`.
pub fn recover_x<T: Scalar>(s: &PdaState<T>) -> Result<Matrix<T>> {
    let lhs = s.z12().star(s.star);
    let rhs = s.z22().star(s.star);
    lu_solve(&lhs, &rhs).map_err(|_| Error::Z12Singular)
}

/// Recovery via the fixed limit coefficient `-A + B^star`.
pub fn recover_x_fixed<T: Scalar>(
    s: &PdaState<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<Matrix<T>> {
    let lhs = b.star(s.star).try_sub(a)?;
    let rhs = s.z22().star(s.star);
    lu_solve(&lhs, &rhs).map_err(|_| Error::Z12Singular)
}

/// Rank-deflated recovery for the (almost-)critical case: when `(Z12)^star`
/// is numerically rank n-1, solve on the regular part and pin the
/// null-direction component against the original equation by least squares.
///
/// Transpose case only; the Hermitian case has no critical regime under the
/// unique-solvability hypotheses.
pub fn recover_x_deflated<T: Scalar>(
    s: &PdaState<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<Matrix<T>> {
    let n = s.h12.rows();
    let lhs = s.z12().star(s.star);
    let rhs = s.z22().star(s.star);
    let (q, r, piv) = qr_pivoted(&lhs);
    let rank_tol =
        T::Real::of(1e4) * T::Real::of(n as f64) * T::Real::unit_roundoff() * r[(0, 0)].abs();
    let rank = rank_from_pivoted_r(&r, rank_tol);
    if rank == n {
        return lu_solve(&lhs, &rhs).map_err(|_| Error::Z12Singular);
    }
    if rank + 1 != n || s.star != StarOp::Transpose {
        return Err(Error::Z12Singular);
    }
    // basic solution with the deficient pivot variable set to zero
    let qh_rhs = q.conj_transpose().try_mul(&rhs)?;
    let r_reg = r.block(0, rank, 0, rank);
    let mut y = qh_rhs.block(0, rank, 0, n);
    for i in (0..rank).rev() {
        let d = r_reg[(i, i)];
        for j in 0..n {
            let mut v = y[(i, j)];
            for k in i + 1..rank {
                v -= r_reg[(i, k)] * y[(k, j)];
            }
            y[(i, j)] = v / d;
        }
    }
    let mut x0 = Matrix::zeros(n, n);
    for i in 0..rank {
        for j in 0..n {
            x0[(piv[i], j)] = y[(i, j)];
        }
    }
    // null direction of lhs from the deficient column of R
    let mut w = vec![T::zero(); rank];
    for i in (0..rank).rev() {
        let mut v = -r[(i, rank)];
        for k in i + 1..rank {
            v -= r_reg[(i, k)] * w[k];
        }
        w[i] = v / r_reg[(i, i)];
    }
    let mut null = vec![T::zero(); n];
    for i in 0..rank {
        null[piv[i]] = w[i];
    }
    null[piv[rank]] = T::one();
    let nn = null
        .iter()
        .map(|z| z.abs_sqr())
        .fold(T::Real::zero(), |u, v| u + v)
        .sqrt();
    let null: Vec<T> = null
        .into_iter()
        .map(|z| z * T::from_real(T::Real::one() / nn))
        .collect();

    // least-squares fit of X = X0 + null * xi^T against A X + X^T B = C
    let resid = a
        .try_mul(&x0)?
        .try_add(&x0.transpose().try_mul(b)?)?
        .try_sub(c)?;
    let aq: Vec<T> = (0..n)
        .map(|i| (0..n).map(|k| a[(i, k)] * null[k]).sum())
        .collect();
    let bq: Vec<T> = (0..n)
        .map(|j| (0..n).map(|k| null[k] * b[(k, j)]).sum())
        .collect();
    // row-major vec of (Aq xi^T + xi bq^T) as a linear map of xi
    let mut m = Matrix::zeros(n * n, n);
    let mut rhs_ls = Matrix::zeros(n * n, 1);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            m[(row, j)] += aq[i];
            m[(row, i)] += bq[j];
            rhs_ls[(row, 0)] = -resid[(i, j)];
        }
    }
    let xi = qr_least_squares(&m, &rhs_ls)?;
    let mut x = x0;
    for i in 0..n {
        for j in 0..n {
            let upd = null[i] * xi[(j, 0)];
            x[(i, j)] += upd;
        }
    }
    Ok(x)
}

/// The paper's error metrics: relative normalized residual and, when a
/// reference solution is given, the relative error.
pub fn residual_metrics<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    x_k: &Matrix<T>,
    star: StarOp,
    x_ref: Option<&Matrix<T>>,
) -> Result<(T::Real, Option<T::Real>)> {
    let resid = a
        .try_mul(x_k)?
        .try_add(&x_k.star(star).try_mul(b)?)?
        .try_sub(c)?
        .frob_norm();
    let nx = x_k.frob_norm();
    let denom = (a.frob_norm() + b.frob_norm()) * nx + c.frob_norm();
    let res = if denom == T::Real::zero() {
        T::Real::zero()
    } else {
        resid / denom
    };
    let rerr = match x_ref {
        Some(xr) => Some(x_k.try_sub(xr)?.frob_norm() / xr.frob_norm()),
        None => None,
    };
    Ok((res, rerr))
}

/// How an iteration run is judged to have behaved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    Quadratic,
    Linear,
    MaxIter,
    Diverged,
}

/// Full record of a doubling-algorithm run.
#[derive(Clone, Debug)]
pub struct SolveReport<T: Scalar> {
    pub x: Matrix<T>,
    pub iterations: usize,
    pub err_history: Vec<T::Real>,
    pub res_history: Vec<T::Real>,
    pub rerr_history: Option<Vec<T::Real>>,
    pub convergence: Convergence,
}

/// Options for [`pda_solve`].
pub struct PdaOptions<'a, T: Scalar> {
    pub max_iter: usize,
    /// Stopping threshold; defaults to n^2 u when `None`.
    pub stop: Option<T::Real>,
    pub reference_x: Option<&'a Matrix<T>>,
    pub recover: RecoverMode,
}

impl<T: Scalar> Default for PdaOptions<'_, T> {
    fn default() -> Self {
        PdaOptions {
            max_iter: 60,
            stop: None,
            reference_x: None,
            recover: RecoverMode::Displayed,
        }
    }
}

/// Errors from [`pda_solve`]; the iteration cap carries the partial report.
#[derive(Debug, thiserror::Error)]
pub enum PdaError<T: Scalar> {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("iteration limit reached without convergence")]
    MaxIterExceeded(Box<SolveReport<T>>),
}

fn classify<TR: Real>(errs: &[TR], converged: bool, hit_cap: bool) -> Convergence {
    let n = errs.len();
    // quadratic: two consecutive exponent-doubling windows; the e0 < 0.25
    // floor keeps plain halving sequences from sneaking in near 1
    let mut streak = 0;
    for k in 0..n.saturating_sub(1) {
        let (e0, e1) = (errs[k], errs[k + 1]);
        if e0 > TR::zero() && e0 < TR::of(0.25) && e1 > TR::zero() && e1.ln() <= TR::of(1.8) * e0.ln()
        {
            streak += 1;
            if streak >= 2 {
                return Convergence::Quadratic;
            }
        } else {
            streak = 0;
        }
    }
    // linear: trailing five ratios inside [0.25, 0.75]
    if n >= 6 {
        let band = errs[n - 5..]
            .iter()
            .zip(&errs[n - 6..n - 1])
            .all(|(e1, e0)| {
                *e0 > TR::zero() && {
                    let r = *e1 / *e0;
                    r >= TR::of(0.25) && r <= TR::of(0.75)
                }
            });
        if band {
            return Convergence::Linear;
        }
    }
    if converged {
        // converged too fast to exhibit a measurable signature
        return Convergence::Quadratic;
    }
    if hit_cap {
        let grew = errs
            .first()
            .zip(errs.last())
            .map(|(f, l)| *l > TR::of(1e3) * (*f + TR::one()))
            .unwrap_or(false);
        if grew {
            return Convergence::Diverged;
        }
        return Convergence::MaxIter;
    }
    Convergence::MaxIter
}

/// Run the doubling algorithm on `A X + X^star B = C` until the error, the
/// residual, or (when a reference is given) the relative error drops below
/// the stopping threshold.
pub fn pda_solve<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    star: StarOp,
    opts: &PdaOptions<'_, T>,
) -> std::result::Result<SolveReport<T>, PdaError<T>> {
    let n = a.rows();
    let verdict = classify_star_solvability(a, b, star, T::Real::of(1e-8)).map_err(PdaError::Core)?;
    if let SolvabilityVerdict::NotUniquelySolvable { .. } = verdict {
        return Err(PdaError::Core(Error::NotUniquelySolvable(String::new())));
    }
    let stop = opts.stop.unwrap_or_else(|| {
        T::Real::of((n * n) as f64) * T::Real::unit_roundoff()
    });
    let zp = build_z(a, b, c, star).map_err(PdaError::Core)?;
    let mut state = PdaState::from_split(&split_hk(&zp));

    let mut err_history = Vec::new();
    let mut res_history = Vec::new();
    let mut rerr_history = opts.reference_x.map(|_| Vec::new());
    let mut last_x: Option<Matrix<T>> = None;

    for _ in 0..opts.max_iter {
        state = pda_step(&state).map_err(PdaError::Core)?;
        let err = state.err();
        let x_k = match opts.recover {
            RecoverMode::Displayed => recover_x_deflated(&state, a, b, c),
            RecoverMode::FixedCoefficient => recover_x_fixed(&state, a, b),
        };
        let (res, rerr) = match &x_k {
            Ok(x) => {
                let (res, rerr) =
                    residual_metrics(a, b, c, x, star, opts.reference_x).map_err(PdaError::Core)?;
                last_x = Some(x.clone());
                (res, rerr)
            }
            Err(_) => (T::Real::infinity(), None),
        };
        err_history.push(err);
        res_history.push(res);
        if let Some(h) = rerr_history.as_mut() {
            h.push(rerr.unwrap_or(T::Real::infinity()));
        }
        let mut best = if err < res { err } else { res };
        if let Some(r) = rerr {
            if r < best {
                best = r;
            }
        }
        if best < stop {
            let x = last_x.ok_or(PdaError::Core(Error::Z12Singular))?;
            let convergence = classify(&err_history, true, false);
            return Ok(SolveReport {
                x,
                iterations: state.iter,
                err_history,
                res_history,
                rerr_history,
                convergence,
            });
        }
    }
    let convergence = classify(&err_history, false, true);
    Err(PdaError::MaxIterExceeded(Box::new(SolveReport {
        x: last_x.unwrap_or_else(|| Matrix::zeros(n, n)),
        iterations: opts.max_iter,
        err_history,
        res_history,
        rerr_history,
        convergence,
    })))
}

/// Solve `A X + X^star B = C` by the deflating subspace of the palindromic
/// pencil `Z^star - lambda Z`: select the invariant subspace carrying
/// `sigma(A^star - lambda B)` and return `X = U V^{-1}`.
pub fn solve_via_deflating<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    star: StarOp,
) -> Result<Matrix<T>> {
    let verdict = classify_star_solvability(a, b, star, T::Real::of(1e-8))?;
    if verdict != SolvabilityVerdict::UniquelySolvable {
        return Err(Error::NotUniquelySolvable(String::new()));
    }
    let n = a.rows();
    let bound = T::Real::one() / (T::Real::of(n as f64) * T::Real::unit_roundoff().sqrt());
    let b_ok = cond_estimate(b).map_or(false, |cb| cb <= bound);
    if !b_ok {
        let a_ok = cond_estimate(a).map_or(false, |ca| ca <= bound);
        if a_ok {
            // star both sides: B^star X + X^star A^star = C^star, same X
            return solve_via_deflating(&b.star(star), &a.star(star), &c.star(star), star);
        }
    }

    let zp = build_z(a, b, c, star)?;
    let z = &zp.z;
    let z_star = z.star(star);
    let targets = pencil_eigenvalues(&a.star(star), b)?;

    // reduce the pencil (Z^star, Z) through a resolvent at a shift mu
    let mut reduced: Option<(Matrix<T>, T)> = None;
    for phase in [-1.0f64, 0.147583, 0.663123, 0.912047] {
        let mu = if phase < 0.0 {
            T::zero()
        } else {
            let ang = T::Real::of(phase * std::f64::consts::TAU);
            T::from_parts(ang.cos(), ang.sin())
        };
        let shifted = z_star.try_sub(&z.scale(mu))?;
        if let Ok(f) = Lu::factor(&shifted) {
            if f.cond_estimate()? <= T::Real::one() / (T::Real::of((2 * n) as f64) * T::Real::unit_roundoff().sqrt()) {
                reduced = Some((f.solve(z)?, mu));
                break;
            }
        }
    }
    let (w, mu) = reduced.ok_or(Error::SingularPencil)?;

    // invariant subspace of W = (Z^star - mu Z)^-1 Z for eta = 1/(lambda - mu)
    let schur = schur_decompose(&w)?;
    let pool = schur.t.diag();
    let eta_targets: Vec<T> = targets
        .eigs
        .iter()
        .map(|e| {
            // eta = beta / (alpha - mu beta)
            e.beta / (e.alpha - mu * e.beta)
        })
        .collect();
    let picked = greedy_match(&pool, &eta_targets);
    let scale = eta_targets
        .iter()
        .map(|t| t.abs())
        .fold(T::Real::one(), |x, y| if y > x { y } else { x });
    for (idx, &p) in picked.iter().enumerate() {
        if (pool[p] - eta_targets[idx]).abs() > T::Real::of(1e-6) * scale {
            return Err(Error::SelectionAmbiguous);
        }
    }
    let mut mask = vec![false; 2 * n];
    for i in picked {
        mask[i] = true;
    }
    let ordered = reorder_schur_mask(&schur, &mask)?;
    let u = ordered.q.block(0, n, 0, n);
    let v = ordered.q.block(n, 2 * n, 0, n);
    match cond_estimate(&v) {
        Some(cv) if cv <= bound => {}
        _ => return Err(Error::VSingular),
    }
    let xt = lu_solve(&v.transpose(), &u.transpose())?;
    Ok(xt.transpose())
}
