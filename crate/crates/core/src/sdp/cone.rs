//! Product cone of a nonnegative orthant and PSD blocks in `svec` form.
//!
//! `svec` stacks the lower triangle column by column with off-diagonal
//! entries scaled by `sqrt 2`, so the Euclidean inner product of two vectors
//! equals the trace inner product of the matrices.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use std::f64::consts::SQRT_2;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDims {
    pub nonneg: usize,
    pub psd: Vec<usize>,
}

impl ConeDims {
    /// Length of a cone vector.
    pub fn len(&self) -> usize {
        self.nonneg + self.psd.iter().map(|&n| svec_len(n)).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Barrier degree: orthant length plus block sides.
    pub fn degree(&self) -> usize {
        self.nonneg + self.psd.iter().sum::<usize>()
    }

    /// Offsets of the PSD blocks inside a cone vector.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut off = self.nonneg;
        self.psd
            .iter()
            .map(|&n| {
                let o = off;
                off += svec_len(n);
                o
            })
            .collect()
    }

    /// The cone's identity element.
    pub fn identity(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.len());
        for i in 0..self.nonneg {
            e[i] = 1.0;
        }
        for (&n, off) in self.psd.iter().zip(self.block_offsets()) {
            let mut k = off;
            for j in 0..n {
                e[k] = 1.0;
                k += n - j;
            }
        }
        e
    }
}

pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

pub fn svec_into(m: &DMatrix<f64>, out: &mut [f64]) {
    let n = m.nrows();
    let mut k = 0;
    for j in 0..n {
        out[k] = m[(j, j)];
        k += 1;
        for i in j + 1..n {
            out[k] = SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)]);
            k += 1;
        }
    }
}

pub fn svec(m: &DMatrix<f64>) -> DVector<f64> {
    let mut v = DVector::zeros(svec_len(m.nrows()));
    svec_into(m, v.as_mut_slice());
    v
}

pub fn smat(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        m[(j, j)] = v[k];
        k += 1;
        for i in j + 1..n {
            let x = v[k] / SQRT_2;
            m[(i, j)] = x;
            m[(j, i)] = x;
            k += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svec_preserves_inner_product() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 5.0, 3.0, 5.0, 6.0]);
        let b = DMatrix::from_row_slice(3, 3, &[0.5, -1.0, 0.0, -1.0, 2.0, 1.5, 0.0, 1.5, -3.0]);
        let tr = (&a * &b).trace();
        assert!((svec(&a).dot(&svec(&b)) - tr).abs() < 1e-13);
        assert_eq!(smat(svec(&a).as_slice(), 3), a);
    }

    #[test]
    fn identity_and_offsets() {
        let c = ConeDims { nonneg: 2, psd: vec![2, 3] };
        assert_eq!(c.len(), 2 + 3 + 6);
        assert_eq!(c.degree(), 7);
        assert_eq!(c.block_offsets(), vec![2, 5]);
        let e = c.identity();
        assert_eq!(e.as_slice(), &[1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    }
}
