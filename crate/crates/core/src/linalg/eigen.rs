//! Hermitian / real-symmetric eigensolver.
//!
//! Householder reduction to tridiagonal form, a diagonal phase change that
//! makes the tridiagonal matrix real, then implicit-shift QL iterations
//! (the classical `tql2` scheme) with the rotations accumulated into the
//! eigenvector matrix.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

/// Tridiagonal reduction `A = Q T Q^dag` with `T` real symmetric.
///
/// Returns the diagonal, the sub-diagonal (length `n - 1`) and, if requested,
/// the unitary `Q` (already including the phase change).
pub(crate) fn tridiagonalize<T>(a: &DMatrix<T>, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<DMatrix<T>>)
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    let mut a = a.clone();
    let mut q = if want_q { Some(DMatrix::<T>::identity(n, n)) } else { None };

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut v: Vec<T> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let tail: f64 = v[1..].iter().map(|x| x.modulus_squared()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (tail + v[0].modulus_squared()).sqrt();
        let x0 = v[0];
        let phase = if x0.modulus() == 0.0 {
            T::one()
        } else {
            x0.unscale(x0.modulus())
        };
        let alpha = -phase.scale(norm);
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x.modulus_squared()).sum();
        let tau = 2.0 / vnorm2;

        // p = tau * A22 v
        let mut p = vec![T::zero(); len];
        for i in 0..len {
            let mut acc = T::zero();
            for j in 0..len {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = acc.scale(tau);
        }
        // v^dag p is real for Hermitian A22
        let mut vp = T::zero();
        for i in 0..len {
            vp += v[i].conjugate() * p[i];
        }
        let half = vp.real() * tau * 0.5;
        let w: Vec<T> = (0..len).map(|i| p[i] - v[i].scale(half)).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conjugate() + w[i] * v[j].conjugate();
                a[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conjugate();
        for i in 1..len {
            a[(k + 1 + i, k)] = T::zero();
            a[(k, k + 1 + i)] = T::zero();
        }

        if let Some(q) = q.as_mut() {
            // Q <- Q H on columns k+1..n
            for r in 0..n {
                let mut acc = T::zero();
                for j in 0..len {
                    acc += q[(r, k + 1 + j)] * v[j];
                }
                let acc = acc.scale(tau);
                for j in 0..len {
                    q[(r, k + 1 + j)] -= acc * v[j].conjugate();
                }
            }
        }
    }

    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].real()).collect();
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut phase = T::one();
    for k in 0..n.saturating_sub(1) {
        let beta = a[(k + 1, k)];
        let m = beta.modulus();
        e[k] = m;
        if m > 0.0 {
            phase *= beta.unscale(m);
        }
        if let Some(q) = q.as_mut() {
            for r in 0..n {
                q[(r, k + 1)] *= phase;
            }
        }
    }
    (d, e, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix. On return `d` holds the
/// eigenvalues (unsorted) and the columns of `v` have been rotated into the
/// corresponding eigenvectors.
pub(crate) fn tql2<T>(d: &mut [f64], sub: &[f64], mut v: Option<&mut DMatrix<T>>) -> Result<()>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(sub);

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::EigenNoConvergence);
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        for k in 0..v.nrows() {
                            let h = v[(k, i + 1)];
                            v[(k, i + 1)] = v[(k, i)].scale(s) + h.scale(c);
                            v[(k, i)] = v[(k, i)].scale(c) - h.scale(s);
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian (or real symmetric) matrix, eigenvalues
/// sorted in descending order with matching eigenvector columns.
pub(crate) fn eigh<T>(a: &DMatrix<T>) -> Result<(Vec<f64>, DMatrix<T>)>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    let (mut d, e, q) = tridiagonalize(a, true);
    let mut q = q.expect("requested");
    tql2(&mut d, &e, Some(&mut q))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let vals = order.iter().map(|&i| d[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    Ok((vals, vecs))
}

/// Eigenvalues only, descending.
pub(crate) fn eigvalsh<T>(a: &DMatrix<T>) -> Result<Vec<f64>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let (mut d, e, _) = tridiagonalize(a, false);
    tql2::<T>(&mut d, &e, None)?;
    d.sort_by(|a, b| b.total_cmp(a));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&m + m.adjoint()).scale(0.5)
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for n in [1, 2, 3, 6, 9, 17] {
            let a = random_hermitian(n, n as u64);
            let (vals, v) = eigh(&a).unwrap();
            let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                vals.iter().map(|&x| Complex64::new(x, 0.0)),
            ));
            let rec = &v * lam * v.adjoint();
            assert!(crate::linalg::max_abs(&(rec - &a)) < 1e-12, "n = {n}");
            let gram = v.adjoint() * &v;
            assert!(crate::linalg::max_abs(&(gram - DMatrix::identity(n, n))) < 1e-12);
            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn real_symmetric_path() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let vals = eigvalsh(&a).unwrap();
        let s = 2f64.sqrt();
        let expect = [2.0 + s, 2.0, 2.0 - s];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-13);
        }
    }

    #[test]
    fn already_diagonal_and_degenerate() {
        let a = DMatrix::<f64>::identity(5, 5) * 3.0;
        let (vals, v) = eigh(&a).unwrap();
        assert!(vals.iter().all(|&x| (x - 3.0).abs() < 1e-15));
        assert!((v.transpose() * &v - DMatrix::identity(5, 5)).abs().max() < 1e-14);
    }
}
