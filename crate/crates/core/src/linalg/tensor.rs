//! Subsystem bookkeeping for operators on tensor-product spaces.
//!
//! Basis states are indexed in row-major (big-endian) order: for dims
//! `[d0, d1, ..., dk]` the index of `|i0 i1 ... ik>` is
//! `((i0 * d1 + i1) * d2 + i2) ...`.

use super::ComplexMatrix;
use crate::error::{Error, Result};

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn compose(digits: impl Iterator<Item = (usize, usize)>) -> usize {
    digits.fold(0, |acc, (digit, dim)| acc * dim + digit)
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let side: usize = dims.iter().product();
    if m.nrows() != side || m.ncols() != side {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, subsystem dims {:?} give side {}",
            m.nrows(),
            m.ncols(),
            dims,
            side
        )));
    }
    Ok(())
}

/// Kronecker product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Trace out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidInput(format!(
            "invalid subsystem set {keep:?} for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let out_side: usize = keep_sorted.iter().map(|&k| dims[k]).product();
    let n = m.nrows();
    let mut kidx = vec![0; n];
    let mut tidx = vec![0; n];
    for i in 0..n {
        let dg = digits(i, dims);
        kidx[i] = compose(keep_sorted.iter().map(|&k| (dg[k], dims[k])));
        tidx[i] = compose(traced.iter().map(|&k| (dg[k], dims[k])));
    }
    let mut out = ComplexMatrix::zeros(out_side, out_side);
    for r in 0..n {
        for c in 0..n {
            if tidx[r] == tidx[c] {
                out[(kidx[r], kidx[c])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Transpose the listed subsystems: `(|ij><kl|)^{T_B} = |il><kj|`.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], systems: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if systems.iter().any(|&s| s >= dims.len()) {
        return Err(Error::InvalidInput(format!(
            "invalid subsystem set {systems:?} for {} subsystems",
            dims.len()
        )));
    }
    let n = m.nrows();
    let all: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut rd = all[r].clone();
            let mut cd = all[c].clone();
            for &s in systems {
                std::mem::swap(&mut rd[s], &mut cd[s]);
            }
            let nr = compose(rd.iter().copied().zip(dims.iter().copied()));
            let nc = compose(cd.iter().copied().zip(dims.iter().copied()));
            out[(nr, nc)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Reorder subsystems: position `i` of the result holds old subsystem `perm[i]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut seen = perm.to_vec();
    seen.sort_unstable();
    if seen != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n = m.nrows();
    let map: Vec<usize> = (0..n)
        .map(|i| {
            let dg = digits(i, dims);
            compose(perm.iter().map(|&p| dg[p]).zip(new_dims.iter().copied()))
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows};

    fn ket_bra(n: usize, r: usize, col: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(r, col)] = c(1.0);
        m
    }

    #[test]
    fn basis_rule_for_partial_transpose() {
        // |01><10| -> |00><11|
        let m = ket_bra(4, 0b01, 0b10);
        let t = partial_transpose(&m, &[2, 2], &[1]).unwrap();
        assert_eq!(t, ket_bra(4, 0b00, 0b11));
    }

    #[test]
    fn trace_of_product_state() {
        let rho = from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let sigma = from_real_rows(&[&[0.2, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.3]]);
        let prod = kron(&rho, &sigma);
        let a = partial_trace(&prod, &[2, 3], &[0]).unwrap();
        assert!(crate::linalg::max_abs(&(a - &rho)) < 1e-15);
        let b = partial_trace(&prod, &[2, 3], &[1]).unwrap();
        assert!(crate::linalg::max_abs(&(b - &sigma)) < 1e-15);
    }

    #[test]
    fn permutation_swaps_kron_factors() {
        let a = from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 2.0], &[0.0, 5.0, 1.0]]);
        let ab = kron(&a, &b);
        let ba = permute_subsystems(&ab, &[2, 3], &[1, 0]).unwrap();
        assert_eq!(ba, kron(&b, &a));
    }

    #[test]
    fn rejects_bad_subsystems() {
        let m = ComplexMatrix::identity(4, 4);
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_transpose(&m, &[2, 2], &[5]).is_err());
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
    }
}
