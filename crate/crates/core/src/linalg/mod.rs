//! Dense complex linear algebra over labelled tensor-product spaces.

mod eigen;
mod tensor;

pub(crate) use eigen::{eigh, eigvalsh};
pub use tensor::{kron, partial_trace, partial_transpose, permute_subsystems};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest tolerated entrywise anti-Hermitian part; anything below is
/// symmetrized away on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build a complex matrix from rows of real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(n, m, |i, j| c(rows[i][j]))
}

/// `|v><v|` for a column vector.
pub fn projector(v: &[Complex64]) -> ComplexMatrix {
    let n = v.len();
    ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_error(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

/// Hilbert-Schmidt inner product `tr(a^dag b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!("trace norm of non-square {:?} matrix", m.shape())));
    }
    Ok(m.clone().svd(false, false).singular_values.sum())
}

/// `-p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
    }
    Ok(xlog2x_neg(p) + xlog2x_neg(1.0 - p))
}

#[inline]
fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let l = self.eigenvalues[j];
            scaled.column_mut(j).scale_mut(l);
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// Apply a real function to the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        SpectralDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|&x| f(x)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
        .reconstruct()
    }
}

/// Complex Hermitian matrix tagged with its tensor factor dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates the side length and Hermiticity; tiny anti-Hermitian parts
    /// are symmetrized away.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(dims, matrix, HERMITIAN_TOL)
    }

    pub fn with_tolerance(dims: Vec<usize>, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let side: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidInput(format!("bad subsystem dims {dims:?}")));
        }
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need a {side}x{side} matrix, got {:?}",
                matrix.shape()
            )));
        }
        let err = hermiticity_error(&matrix);
        if err > tol {
            return Err(Error::NotHermitian(err));
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { dims, matrix })
    }

    /// Single-system operator.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(vec![n], matrix)
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        Self { dims, matrix: identity(n) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) });
        Self { dims: vec![n], matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Same matrix, new subsystem split.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(dims, self.matrix.clone())
    }

    pub fn kron(&self, other: &HermitianOperator) -> HermitianOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, matrix: kron(&self.matrix, &other.matrix) }
    }

    pub fn scale(&self, a: f64) -> HermitianOperator {
        Self { dims: self.dims.clone(), matrix: self.matrix.scale(a) }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<HermitianOperator> {
        if self.dims.len() < 2 || keep.is_empty() {
            return Err(Error::InvalidInput(
                "partial trace needs >= 2 subsystems and a non-empty keep set".into(),
            ));
        }
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        let dims = k.iter().map(|&i| self.dims[i]).collect();
        Ok(Self { dims, matrix: m })
    }

    pub fn partial_transpose(&self, subsystem: usize) -> Result<HermitianOperator> {
        let m = partial_transpose(&self.matrix, &self.dims, &[subsystem])?;
        Ok(Self { dims: self.dims.clone(), matrix: m })
    }

    pub fn permute(&self, perm: &[usize]) -> Result<HermitianOperator> {
        let m = permute_subsystems(&self.matrix, &self.dims, perm)?;
        Ok(Self { dims: perm.iter().map(|&p| self.dims[p]).collect(), matrix: m })
    }

    pub fn spectral_decompose(&self) -> Result<SpectralDecomposition> {
        let (eigenvalues, eigenvectors) = eigh(&self.matrix)?;
        Ok(SpectralDecomposition { eigenvalues, eigenvectors })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("non-empty"))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        let tr: f64 = ev.iter().sum();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("state has trace {tr}")));
        }
        let min = ev[ev.len() - 1];
        if min < -1e-9 {
            return Err(Error::NotPsd(min));
        }
        Ok(ev.iter().map(|&x| xlog2x_neg(x)).sum())
    }
}

/// Free-function forms of the operator methods.
pub fn spectral_decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    h.spectral_decompose()
}

pub fn operator_norm(h: &HermitianOperator) -> Result<f64> {
    h.operator_norm()
}

pub fn is_psd(h: &HermitianOperator, tol: f64) -> Result<bool> {
    h.is_psd(tol)
}

pub fn von_neumann_entropy(rho: &HermitianOperator) -> Result<f64> {
    rho.entropy()
}

/// Hermitian check for an arbitrary matrix, returning the spectral
/// decomposition.
pub fn spectral_decompose_matrix(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    HermitianOperator::from_matrix(m.clone())?.spectral_decompose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C;

    fn sx() -> ComplexMatrix {
        from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }
    fn sz() -> ComplexMatrix {
        from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let p0 = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let p1 = from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let k = kron(&p0, &p1);
        let expect = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0), c(1.0), c(0.0), c(0.0)]));
        assert_eq!(k, expect);
        let xx = kron(&sx(), &sx());
        assert_eq!(&xx * &xx, identity(4));
    }

    #[test]
    fn partial_trace_of_max_entangled() {
        let mut phi = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                phi[(3 * i, 3 * j)] = c(1.0);
            }
        }
        let h = HermitianOperator::new(vec![2, 2], phi).unwrap();
        let b = h.partial_trace(&[1]).unwrap();
        assert_eq!(b.matrix(), &identity(2));
        assert_eq!(b.dims(), &[2]);
        // partial transpose of the unnormalized max-entangled operator is SWAP
        let t = h.partial_transpose(1).unwrap();
        assert_abs_diff_eq!(t.operator_norm().unwrap(), 1.0, epsilon = 1e-14);
        assert!(!t.is_psd(1e-9).unwrap());
        assert_abs_diff_eq!(t.min_eigenvalue().unwrap(), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn spectral_examples() {
        let d = HermitianOperator::diagonal(&[1.0, 3.0]);
        let s = d.spectral_decompose().unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 1.0]);
        assert_abs_diff_eq!(s.eigenvectors[(1, 0)].norm(), 1.0, epsilon = 1e-15);
        let x = HermitianOperator::from_matrix(sx()).unwrap();
        let ev = x.eigenvalues().unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!(HermitianOperator::identity(vec![3]).operator_norm().unwrap(), 1.0);
        assert_abs_diff_eq!(HermitianOperator::diagonal(&[-5.0, 2.0]).operator_norm().unwrap(), 5.0);
        assert_abs_diff_eq!(trace_norm(&sz()).unwrap(), 2.0, epsilon = 1e-14);
        let rho = from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]]);
        assert_abs_diff_eq!(trace_norm(&rho).unwrap(), 1.0, epsilon = 1e-14);
        assert!(trace_norm(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn entropies() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.11).unwrap(), 0.499915958164528, epsilon = 1e-12);
        assert!(binary_entropy(1.5).is_err());
        let mixed = HermitianOperator::diagonal(&[0.75, 0.25]);
        assert_abs_diff_eq!(mixed.entropy().unwrap(), 0.8112781244591328, epsilon = 1e-12);
        let max = HermitianOperator::identity(vec![4]).scale(0.25);
        assert_abs_diff_eq!(max.entropy().unwrap(), 2.0, epsilon = 1e-12);
        let pure = HermitianOperator::from_matrix(projector(&[C::new(0.6, 0.0), C::new(0.0, 0.8)])).unwrap();
        assert_abs_diff_eq!(pure.entropy().unwrap(), 0.0, epsilon = 1e-12);
        assert!(HermitianOperator::diagonal(&[1.2, -0.2]).entropy().is_err());
    }

    #[test]
    fn hs_inner_examples() {
        assert_eq!(hs_inner(&identity(2), &identity(2)).unwrap(), c(2.0));
        assert_eq!(hs_inner(&sx(), &sz()).unwrap(), c(0.0));
        assert!(hs_inner(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn hermiticity_is_enforced() {
        let mut m = identity(2);
        m[(0, 1)] = C::new(0.0, 1e-13);
        assert!(HermitianOperator::from_matrix(m.clone()).is_ok());
        m[(0, 1)] = C::new(0.0, 1e-6);
        assert!(matches!(HermitianOperator::from_matrix(m), Err(Error::NotHermitian(_))));
        assert!(HermitianOperator::new(vec![2, 2], identity(3)).is_err());
    }
}
