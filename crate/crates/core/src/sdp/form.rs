//! Real conic standard form
//!
//! ```text
//! minimize    c^T x + offset
//! subject to  A x = b
//!             G x + s = h,   s in K
//! ```
//!
//! with `K` described by [`ConeDims`].

use std::io::Write;

use nalgebra::{DMatrix, DVector};

use super::cone::ConeDims;
use crate::error::Result;
use crate::linalg::eigh;

/// Rows of `A` whose pivoted-QR diagonal falls below this (relative to the
/// largest) are treated as dependent.
pub const PRESOLVE_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct StandardConicForm {
    pub c: DVector<f64>,
    pub offset: f64,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    pub cones: ConeDims,
}

impl StandardConicForm {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    /// Writes the problem as one `row col value` line per nonzero.
    ///
    /// ```text
    /// qcap-conic 1
    /// vars <n> eq <p> cone <m>
    /// nonneg <l>
    /// psd <n1> <n2> ...
    /// offset <value>
    /// c            then   <i> <value> lines
    /// A / b / G / h sections in the same style
    /// end
    /// ```
    pub fn write_sparse<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "qcap-conic 1")?;
        writeln!(w, "vars {} eq {} cone {}", self.c.len(), self.a.nrows(), self.g.nrows())?;
        writeln!(w, "nonneg {}", self.cones.nonneg)?;
        let sizes: Vec<String> = self.cones.psd.iter().map(|n| n.to_string()).collect();
        writeln!(w, "psd {}", sizes.join(" "))?;
        writeln!(w, "offset {:e}", self.offset)?;
        for (name, v) in [("c", &self.c), ("b", &self.b), ("h", &self.h)] {
            writeln!(w, "{name}")?;
            for (i, x) in v.iter().enumerate() {
                if *x != 0.0 {
                    writeln!(w, "{i} {x:e}")?;
                }
            }
        }
        for (name, m) in [("A", &self.a), ("G", &self.g)] {
            writeln!(w, "{name}")?;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let x = m[(i, j)];
                    if x != 0.0 {
                        writeln!(w, "{i} {j} {x:e}")?;
                    }
                }
            }
        }
        writeln!(w, "end")?;
        Ok(())
    }
}

/// Outcome of eliminating the equality constraints.
#[derive(Clone, Debug)]
pub(crate) enum Presolved {
    Reduced(Reduced),
    /// `A x = b` has no solution.
    InconsistentEqualities(f64),
    /// A direction with `A d = 0`, `G d = 0` and `c^T d != 0` exists.
    UnboundedDirection,
}

/// Problem in the reduced coordinates `x = x0 + M w`.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub x0: DVector<f64>,
    pub m: DMatrix<f64>,
    pub c: DVector<f64>,
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    pub offset: f64,
}

/// Orthonormal basis of the complement of the columns of `q[:, ..r]`.
fn complement_basis(q: &DMatrix<f64>, r: usize) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    let qr = q.columns(0, r);
    let proj = DMatrix::identity(n, n) - &qr * qr.transpose();
    let (vals, vecs) = eigh(&proj)?;
    let k = vals.iter().filter(|&&v| v > 0.5).count();
    Ok(vecs.columns(0, k).into_owned())
}

pub(crate) fn presolve(f: &StandardConicForm) -> Result<Presolved> {
    let n = f.num_vars();
    let p = f.a.nrows();

    let (x0, null) = if p == 0 {
        (DVector::zeros(n), DMatrix::identity(n, n))
    } else {
        // pad A^T so Householder QR returns a full orthogonal Q
        let cols = p.max(n);
        let mut at = DMatrix::zeros(n, cols);
        at.columns_mut(0, p).copy_from(&f.a.transpose());
        let qr = at.col_piv_qr();
        let r = qr.r();
        let q = qr.q();
        let rmax = r[(0, 0)].abs();
        let rank = if rmax == 0.0 {
            0
        } else {
            (0..n.min(cols)).take_while(|&i| r[(i, i)].abs() > PRESOLVE_RANK_TOL * rmax.max(1.0)).count()
        };
        let x0 = if rank == 0 {
            DVector::zeros(n)
        } else {
            let qr_cols = q.columns(0, rank).into_owned();
            let aq = &f.a * &qr_cols;
            let y = aq
                .svd(true, true)
                .solve(&f.b, 1e-14)
                .map_err(|e| crate::error::Error::InvalidInput(e.to_string()))?;
            qr_cols * y
        };
        let resid = (&f.a * &x0 - &f.b).norm();
        if resid > 1e-9 * f.b.norm().max(1.0) {
            return Ok(Presolved::InconsistentEqualities(resid));
        }
        let null = if rank == n { DMatrix::zeros(n, 0) } else { complement_basis(&q, rank)? };
        (x0, null)
    };

    // drop directions invisible to the cone constraints
    let g1 = &f.g * &null;
    let c1 = null.transpose() * &f.c;
    let m = if g1.ncols() == 0 {
        null
    } else {
        let gtg = g1.tr_mul(&g1);
        let (vals, vecs) = eigh(&gtg)?;
        let top = vals.first().copied().unwrap_or(0.0).max(0.0);
        let keep = vals.iter().filter(|&&v| v > 1e-20 * top.max(1.0)).count();
        if keep < vals.len() {
            let dropped = vecs.columns(keep, vals.len() - keep);
            let leak = dropped.transpose() * &c1;
            if leak.norm() > 1e-9 * c1.norm().max(1.0) {
                return Ok(Presolved::UnboundedDirection);
            }
        }
        &null * vecs.columns(0, keep)
    };

    let g = &f.g * &m;
    let h = &f.h - &f.g * &x0;
    let c = m.transpose() * &f.c;
    let offset = f.offset + f.c.dot(&x0);
    Ok(Presolved::Reduced(Reduced { x0, m, c, g, h, offset }))
}
