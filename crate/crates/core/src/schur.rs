//! Complex Schur decomposition: Hessenberg reduction followed by the
//! shifted QR iteration, plus eigenvalue reordering by 1x1 swaps.

use num_traits::{Float, One, Zero};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Scalar};

/// Unitary Schur factorization `M = Q T Q^H` with T upper triangular.
#[derive(Clone, Debug)]
pub struct SchurForm<T: Scalar> {
    pub q: Matrix<T>,
    pub t: Matrix<T>,
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` with real `c >= 0`,
/// chosen so that it maps (a, b) to (r, 0).
fn zrotg<T: Scalar>(a: T, b: T) -> (T::Real, T) {
    if b.abs() == T::Real::zero() {
        return (T::Real::one(), T::zero());
    }
    if a.abs() == T::Real::zero() {
        let s = b.conj() * T::from_real(T::Real::one() / b.abs());
        return (T::Real::zero(), s);
    }
    let aa = a.abs();
    let denom = (aa * aa + b.abs_sqr()).sqrt();
    let c = aa / denom;
    let s = a * T::from_real(T::Real::one() / aa) * b.conj() * T::from_real(T::Real::one() / denom);
    (c, s)
}

/// Left-apply the rotation to rows (i, i+1) over columns c0..c1.
fn rot_rows<T: Scalar>(m: &mut Matrix<T>, i: usize, c: T::Real, s: T, c0: usize, c1: usize) {
    let cc = T::from_real(c);
    for j in c0..c1 {
        let x = m[(i, j)];
        let y = m[(i + 1, j)];
        m[(i, j)] = cc * x + s * y;
        m[(i + 1, j)] = cc * y - s.conj() * x;
    }
}

/// Right-apply the conjugate rotation to columns (j, j+1) over rows r0..r1:
/// `m <- m G^H`.
fn rot_cols<T: Scalar>(m: &mut Matrix<T>, j: usize, c: T::Real, s: T, r0: usize, r1: usize) {
    let cc = T::from_real(c);
    for i in r0..r1 {
        let x = m[(i, j)];
        let y = m[(i, j + 1)];
        m[(i, j)] = cc * x + s.conj() * y;
        m[(i, j + 1)] = cc * y - s * x;
    }
}

/// Reduce to upper Hessenberg form by Householder similarity: `a = Q H Q^H`.
pub fn hessenberg<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<T> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm2 = x
            .iter()
            .map(|z| z.abs_sqr())
            .fold(T::Real::zero(), |u, v| u + v);
        if norm2 == T::Real::zero() {
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = x[0];
        let phase = if x0.abs() == T::Real::zero() {
            T::one()
        } else {
            x0 * T::from_real(T::Real::one() / x0.abs())
        };
        let alpha = -phase * T::from_real(norm);
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v
            .iter()
            .map(|z| z.abs_sqr())
            .fold(T::Real::zero(), |u, w| u + w);
        if vnorm2 == T::Real::zero() {
            continue;
        }
        let beta = (T::Real::one() + T::Real::one()) / vnorm2;
        // left: rows k+1.., right: cols k+1.., accumulate q on the right
        apply_reflector(&mut h, &mut q, &v, beta, k + 1);
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = T::zero();
        }
    }
    (h, q)
}

fn apply_reflector<T: Scalar>(
    h: &mut Matrix<T>,
    q: &mut Matrix<T>,
    v: &[T],
    beta: T::Real,
    off: usize,
) {
    let n = h.rows();
    let len = v.len();
    let b = T::from_real(beta);
    // h <- P h (rows off..)
    for j in 0..n {
        let mut w = T::zero();
        for i in 0..len {
            w += v[i].conj() * h[(off + i, j)];
        }
        w *= b;
        for i in 0..len {
            let upd = w * v[i];
            h[(off + i, j)] -= upd;
        }
    }
    // h <- h P (cols off..)
    for i in 0..n {
        let mut w = T::zero();
        for j in 0..len {
            w += h[(i, off + j)] * v[j];
        }
        w *= b;
        for j in 0..len {
            let upd = w * v[j].conj();
            h[(i, off + j)] -= upd;
        }
    }
    // q <- q P
    for i in 0..n {
        let mut w = T::zero();
        for j in 0..len {
            w += q[(i, off + j)] * v[j];
        }
        w *= b;
        for j in 0..len {
            let upd = w * v[j].conj();
            q[(i, off + j)] -= upd;
        }
    }
}

/// Eigenvalues of the trailing 2x2 of the active block, returning the one
/// closer to the bottom-right entry (Wilkinson shift).
fn wilkinson_shift<T: Scalar>(h: &Matrix<T>, hi: usize) -> T {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let two = T::of(2.0);
    let tr = a + d;
    let diff = a - d;
    let disc = (diff * diff + two * two * b * c).sqrt();
    let l1 = (tr + disc) / two;
    let l2 = (tr - disc) / two;
    if (l1 - d).abs() <= (l2 - d).abs() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition via Wilkinson-shifted QR on the Hessenberg
/// form. Fails with `NoConvergence` past the sweep cap.
pub fn schur_decompose<T: Scalar>(a: &Matrix<T>) -> Result<SchurForm<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "schur of {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite("schur input")?;
    let n = a.rows();
    if n == 0 {
        return Ok(SchurForm {
            q: Matrix::identity(0),
            t: Matrix::identity(0),
        });
    }
    let (mut h, mut q) = hessenberg(a);
    let u = T::Real::unit_roundoff();
    let hnorm = h.frob_norm();
    let zero_thr = u * hnorm;

    let mut hi = n - 1;
    let mut sweeps_this_eig = 0usize;
    let mut total_sweeps = 0usize;
    let cap_per_eig = 30usize;
    let cap_total = 30 * n;

    'outer: loop {
        // deflate negligible subdiagonals
        loop {
            if hi == 0 {
                break 'outer;
            }
            let thr = {
                let t = u * (h[(hi - 1, hi - 1)].abs() + h[(hi, hi)].abs());
                if t > T::Real::zero() {
                    t
                } else {
                    zero_thr
                }
            };
            if h[(hi, hi - 1)].abs() <= thr {
                h[(hi, hi - 1)] = T::zero();
                hi -= 1;
                sweeps_this_eig = 0;
            } else {
                break;
            }
        }
        // find the top of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let thr = {
                let t = u * (h[(lo - 1, lo - 1)].abs() + h[(lo, lo)].abs());
                if t > T::Real::zero() {
                    t
                } else {
                    zero_thr
                }
            };
            if h[(lo, lo - 1)].abs() <= thr {
                h[(lo, lo - 1)] = T::zero();
                break;
            }
            lo -= 1;
        }

        sweeps_this_eig += 1;
        total_sweeps += 1;
        if sweeps_this_eig > cap_per_eig || total_sweeps > cap_total {
            return Err(Error::NoConvergence);
        }
        let mu = if sweeps_this_eig % 10 == 0 {
            // exceptional shift to break symmetry-induced stalls
            h[(hi, hi)] + T::of(0.75) * T::from_real(h[(hi, hi - 1)].abs())
        } else {
            wilkinson_shift(&h, hi)
        };

        // explicit shifted QR step on the window [lo, hi]
        for j in lo..=hi {
            h[(j, j)] -= mu;
        }
        let mut rots: Vec<(T::Real, T)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = zrotg(h[(i, i)], h[(i + 1, i)]);
            rot_rows(&mut h, i, c, s, i, n);
            h[(i + 1, i)] = T::zero();
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            rot_cols(&mut h, i, *c, *s, 0, (i + 2).min(n));
            rot_cols(&mut q, i, *c, *s, 0, n);
        }
        for j in lo..=hi {
            h[(j, j)] += mu;
        }
    }

    // clean the strictly lower part
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = T::zero();
        }
    }
    h.check_finite("schur T")?;
    Ok(SchurForm { q, t: h })
}

/// Eigenvalues of a square matrix: the diagonal of its Schur factor.
pub fn eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    Ok(schur_decompose(a)?.t.diag())
}

/// Swap the adjacent diagonal entries (k, k+1) of an upper-triangular T by a
/// unitary similarity, updating Q alongside.
fn swap_adjacent<T: Scalar>(t: &mut Matrix<T>, q: &mut Matrix<T>, k: usize) -> Result<()> {
    let n = t.rows();
    let l1 = t[(k, k)];
    let l2 = t[(k + 1, k + 1)];
    let b = t[(k, k + 1)];
    let v1 = b;
    let v2 = l2 - l1;
    let vnorm = (v1.abs_sqr() + v2.abs_sqr()).sqrt();
    let scale = l1.abs() + l2.abs() + b.abs();
    if vnorm <= T::Real::unit_roundoff() * scale {
        // equal eigenvalues with negligible coupling: swapping is a no-op
        return Ok(());
    }
    // unitary G whose first column is the lambda2-eigenvector [b, l2 - l1]
    let inv = T::from_real(T::Real::one() / vnorm);
    let u1 = v1 * inv;
    let u2 = v2 * inv;
    // G = [[u1, -conj(u2)], [u2, conj(u1)]]
    let g = [[u1, -u2.conj()], [u2, u1.conj()]];
    // t <- G^H t (rows k, k+1)
    for j in 0..n {
        let x = t[(k, j)];
        let y = t[(k + 1, j)];
        t[(k, j)] = g[0][0].conj() * x + g[1][0].conj() * y;
        t[(k + 1, j)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
    // t <- t G, q <- q G (cols k, k+1)
    for m in [&mut *t, &mut *q] {
        for i in 0..n {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * g[0][0] + y * g[1][0];
            m[(i, k + 1)] = x * g[0][1] + y * g[1][1];
        }
    }
    let resid = t[(k + 1, k)].abs();
    let tol = T::Real::of(1e-12) * T::Real::of(n as f64) * t.frob_norm();
    if resid > tol {
        return Err(Error::SwapIllConditioned(k));
    }
    t[(k + 1, k)] = T::zero();
    Ok(())
}

/// Reorder a Schur form so the positions flagged in `mask` move to the top,
/// preserving relative order. Returns the equivalent reordered form.
pub fn reorder_schur_mask<T: Scalar>(s: &SchurForm<T>, mask: &[bool]) -> Result<SchurForm<T>> {
    let n = s.t.rows();
    assert_eq!(mask.len(), n, "selection mask length");
    let mut t = s.t.clone();
    let mut q = s.q.clone();
    let mut mask = mask.to_vec();
    let mut target = 0usize;
    for j in 0..n {
        if !mask[j] {
            continue;
        }
        let mut pos = j;
        while pos > target {
            swap_adjacent(&mut t, &mut q, pos - 1)?;
            mask.swap(pos - 1, pos);
            pos -= 1;
        }
        target += 1;
    }
    Ok(SchurForm { q, t })
}

/// Reorder so all eigenvalues satisfying `select` occupy the leading block.
pub fn reorder_schur<T: Scalar>(
    s: &SchurForm<T>,
    select: impl Fn(T) -> bool,
) -> Result<SchurForm<T>> {
    let mask: Vec<bool> = s.t.diag().into_iter().map(select).collect();
    reorder_schur_mask(s, &mask)
}
