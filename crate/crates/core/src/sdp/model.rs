//! Declarative SDPs over complex Hermitian, real symmetric and scalar
//! variables.
//!
//! Variables are stored through coordinates in an orthonormal basis
//! (`E_ii`, `(E_ij + E_ji)/sqrt 2`, `i(E_ij - E_ji)/sqrt 2`). Affine
//! expressions are a constant plus a list of linear maps applied to
//! variables; [`SdpProblem::realify`] evaluates every map on the basis to
//! assemble the real conic form.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cone::{svec, svec_len, ConeDims};
use super::form::StandardConicForm;
use super::solver::{solve, ConicSolution, SolverOptions};
use super::SolveStatus;
use crate::error::{Error, Result};
use crate::linalg::{c, kron, max_abs, partial_trace, partial_transpose, permute_subsystems, ComplexMatrix, HermitianOperator};

type LinMap = Arc<dyn Fn(&ComplexMatrix) -> ComplexMatrix + Send + Sync>;

/// Imaginary parts below this mark an expression as real.
const REAL_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Hermitian,
    /// Real symmetric matrix.
    Symmetric,
    Scalar,
    NonnegScalar,
}

/// Handle to a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var {
    id: usize,
    side: usize,
}

impl Var {
    pub fn side(&self) -> usize {
        self.side
    }
}

#[derive(Clone, Debug)]
struct VarDecl {
    name: String,
    kind: VarKind,
    dims: Vec<usize>,
}

impl VarDecl {
    fn side(&self) -> usize {
        self.dims.iter().product()
    }

    fn ncoords(&self) -> usize {
        let n = self.side();
        match self.kind {
            VarKind::Hermitian => n * n,
            VarKind::Symmetric => svec_len(n),
            VarKind::Scalar | VarKind::NonnegScalar => 1,
        }
    }
}

/// Basis of the coordinate space of a variable.
fn var_basis(kind: VarKind, n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    let h = 1.0 / SQRT_2;
    for j in 0..n {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(j, j)] = c(1.0);
        out.push(m);
        for i in j + 1..n {
            let mut m = ComplexMatrix::zeros(n, n);
            m[(i, j)] = c(h);
            m[(j, i)] = c(h);
            out.push(m);
            if kind == VarKind::Hermitian {
                let mut m = ComplexMatrix::zeros(n, n);
                m[(j, i)] = Complex64::new(0.0, h);
                m[(i, j)] = Complex64::new(0.0, -h);
                out.push(m);
            }
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in the basis of [`var_basis`].
fn hermitian_coords(m: &ComplexMatrix, real_only: bool) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::new();
    for j in 0..n {
        out.push(m[(j, j)].re);
        for i in j + 1..n {
            // m[(j, i)] = (re + i im)/sqrt 2 for the upper entry
            out.push(SQRT_2 * m[(j, i)].re);
            if !real_only {
                out.push(SQRT_2 * m[(j, i)].im);
            }
        }
    }
    out
}

/// Affine matrix-valued expression in the problem variables.
#[derive(Clone)]
pub struct Expr {
    side: usize,
    constant: ComplexMatrix,
    terms: Vec<(Var, LinMap)>,
}

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Expr").field("side", &self.side).field("terms", &self.terms.len()).finish()
    }
}

impl Expr {
    pub fn var(v: Var) -> Self {
        Expr {
            side: v.side,
            constant: ComplexMatrix::zeros(v.side, v.side),
            terms: vec![(v, Arc::new(|x: &ComplexMatrix| x.clone()))],
        }
    }

    pub fn constant(m: ComplexMatrix) -> Self {
        Expr { side: m.nrows(), constant: m, terms: Vec::new() }
    }

    pub fn real(x: f64) -> Self {
        Self::constant(ComplexMatrix::from_element(1, 1, c(x)))
    }

    pub fn zero(side: usize) -> Self {
        Self::constant(ComplexMatrix::zeros(side, side))
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Composes a linear map onto the expression.
    pub fn map<F>(self, out_side: usize, f: F) -> Self
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let constant = f(&self.constant);
        let terms = self
            .terms
            .into_iter()
            .map(|(v, g)| {
                let f = f.clone();
                let h: LinMap = Arc::new(move |x: &ComplexMatrix| f(&g(x)));
                (v, h)
            })
            .collect();
        Expr { side: out_side, constant, terms }
    }

    /// `X -> X (x) m`.
    pub fn kron_right(self, m: &ComplexMatrix) -> Self {
        let m = m.clone();
        let side = self.side * m.nrows();
        self.map(side, move |x| kron(x, &m))
    }

    /// `X -> m (x) X`.
    pub fn kron_left(self, m: &ComplexMatrix) -> Self {
        let m = m.clone();
        let side = self.side * m.nrows();
        self.map(side, move |x| kron(&m, x))
    }

    pub fn ptrace(self, dims: &[usize], keep: &[usize]) -> Self {
        let dims = dims.to_vec();
        let keep = keep.to_vec();
        let side = keep.iter().map(|&k| dims[k]).product();
        self.map(side, move |x| partial_trace(x, &dims, &keep).expect("dims checked at realify"))
    }

    pub fn ptranspose(self, dims: &[usize], systems: &[usize]) -> Self {
        let dims = dims.to_vec();
        let systems = systems.to_vec();
        let side = self.side;
        self.map(side, move |x| partial_transpose(x, &dims, &systems).expect("dims checked at realify"))
    }

    pub fn permute(self, dims: &[usize], perm: &[usize]) -> Self {
        let dims = dims.to_vec();
        let perm = perm.to_vec();
        let side = self.side;
        self.map(side, move |x| permute_subsystems(x, &dims, &perm).expect("dims checked at realify"))
    }

    /// `X -> a X a^dag`.
    pub fn congruence(self, a: &ComplexMatrix) -> Self {
        let a = a.clone();
        let side = a.nrows();
        self.map(side, move |x| &a * x * a.adjoint())
    }

    pub fn trace(self) -> Self {
        self.map(1, |x| ComplexMatrix::from_element(1, 1, x.trace()))
    }

    /// `X -> tr(m X)` as a 1x1 expression.
    pub fn trace_with(self, m: &ComplexMatrix) -> Self {
        let m = m.clone();
        self.map(1, move |x| ComplexMatrix::from_element(1, 1, (&m * x).trace()))
    }

    pub fn scale(self, a: f64) -> Self {
        let side = self.side;
        self.map(side, move |x| x.scale(a))
    }

    fn combine(mut self, other: Expr, sign: f64) -> Self {
        assert_eq!(self.side, other.side, "adding expressions of different sides");
        let other = if sign < 0.0 { -other } else { other };
        self.constant += other.constant;
        self.terms.extend(other.terms);
        self
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::var(v)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        self.combine(rhs, 1.0)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self.combine(rhs, -1.0)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Expr {
    type Output = Expr;
    fn mul(self, a: f64) -> Expr {
        self.scale(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, Default)]
pub struct SdpProblem {
    vars: Vec<VarDecl>,
    objective: Option<(Sense, Expr)>,
    eqs: Vec<Expr>,
    psds: Vec<Expr>,
}

/// Value of a variable at the solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Operator(HermitianOperator),
    Scalar(f64),
}

#[derive(Clone, Debug)]
pub struct SolverSolution {
    pub status: SolveStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub assignments: BTreeMap<String, Value>,
}

impl SolverSolution {
    pub fn is_ok(&self) -> bool {
        matches!(self.status, SolveStatus::Optimal | SolveStatus::NearOptimal)
    }

    /// Turns a non-optimal status into an error.
    pub fn ensure_ok(&self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Solver {
                status: self.status,
                pres: self.primal_residual,
                dres: self.dual_residual,
                gap: self.gap,
            })
        }
    }

    pub fn extract(&self, name: &str) -> Result<&Value> {
        self.ensure_ok()?;
        self.assignments.get(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn operator(&self, name: &str) -> Result<HermitianOperator> {
        match self.extract(name)? {
            Value::Operator(h) => Ok(h.clone()),
            Value::Scalar(x) => HermitianOperator::new(vec![1], ComplexMatrix::from_element(1, 1, c(*x))),
        }
    }

    pub fn scalar(&self, name: &str) -> Result<f64> {
        match self.extract(name)? {
            Value::Scalar(x) => Ok(*x),
            Value::Operator(h) if h.side() == 1 => Ok(h.matrix()[(0, 0)].re),
            Value::Operator(_) => Err(Error::InvalidInput(format!("`{name}` is not a scalar"))),
        }
    }
}

/// Real conic form plus the bookkeeping needed to map solutions back.
#[derive(Clone, Debug)]
pub struct Realified {
    pub form: StandardConicForm,
    pub sense: Sense,
    offsets: Vec<usize>,
}

/// `[[Re H, -Im H], [Im H, Re H]]`.
pub fn embed(h: &ComplexMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`embed`], averaging the two copies.
pub fn de_embed(m: &DMatrix<f64>) -> ComplexMatrix {
    let n = m.nrows() / 2;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (m[(i, j)] + m[(i + n, j + n)]);
        let im = 0.5 * (m[(i + n, j)] - m[(i, j + n)]);
        Complex64::new(re, im)
    })
}

impl SdpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    fn declare(&mut self, name: &str, kind: VarKind, dims: &[usize]) -> Var {
        assert!(
            !self.vars.iter().any(|v| v.name == name),
            "variable `{name}` declared twice"
        );
        let decl = VarDecl { name: name.to_string(), kind, dims: dims.to_vec() };
        let side = decl.side();
        self.vars.push(decl);
        Var { id: self.vars.len() - 1, side }
    }

    /// Complex Hermitian matrix variable on the given subsystems.
    pub fn hermitian(&mut self, name: &str, dims: &[usize]) -> Var {
        self.declare(name, VarKind::Hermitian, dims)
    }

    /// Real symmetric matrix variable.
    pub fn symmetric(&mut self, name: &str, dims: &[usize]) -> Var {
        self.declare(name, VarKind::Symmetric, dims)
    }

    /// Hermitian or real symmetric depending on `real`.
    pub fn matrix(&mut self, name: &str, dims: &[usize], real: bool) -> Var {
        if real {
            self.symmetric(name, dims)
        } else {
            self.hermitian(name, dims)
        }
    }

    pub fn scalar(&mut self, name: &str) -> Var {
        self.declare(name, VarKind::Scalar, &[1])
    }

    pub fn nonneg(&mut self, name: &str) -> Var {
        self.declare(name, VarKind::NonnegScalar, &[1])
    }

    pub fn minimize(&mut self, e: impl Into<Expr>) {
        self.objective = Some((Sense::Minimize, e.into()));
    }

    pub fn maximize(&mut self, e: impl Into<Expr>) {
        self.objective = Some((Sense::Maximize, e.into()));
    }

    /// `lhs = rhs`.
    pub fn equal(&mut self, lhs: impl Into<Expr>, rhs: impl Into<Expr>) {
        self.eqs.push(lhs.into() - rhs.into());
    }

    /// `e >= 0` in the PSD order.
    pub fn psd(&mut self, e: impl Into<Expr>) {
        self.psds.push(e.into());
    }

    /// `lhs <= rhs` in the PSD order.
    pub fn le(&mut self, lhs: impl Into<Expr>, rhs: impl Into<Expr>) {
        self.psds.push(rhs.into() - lhs.into());
    }

    pub fn ge(&mut self, lhs: impl Into<Expr>, rhs: impl Into<Expr>) {
        self.psds.push(lhs.into() - rhs.into());
    }

    pub fn num_coordinates(&self) -> usize {
        self.vars.iter().map(|v| v.ncoords()).sum()
    }

    /// Evaluates every term of `e` on the coordinate basis: returns the
    /// constant and one output matrix per touched coordinate.
    fn columns(&self, e: &Expr, offsets: &[usize], bases: &[Vec<ComplexMatrix>]) -> Result<BTreeMap<usize, ComplexMatrix>> {
        let mut cols: BTreeMap<usize, ComplexMatrix> = BTreeMap::new();
        for (v, f) in &e.terms {
            let decl = self.vars.get(v.id).ok_or_else(|| Error::UnknownVariable(format!("#{}", v.id)))?;
            if decl.side() != v.side {
                return Err(Error::UnknownVariable(format!("#{} (side mismatch)", v.id)));
            }
            for (k, b) in bases[v.id].iter().enumerate() {
                let out = f(b);
                if out.shape() != (e.side, e.side) {
                    return Err(Error::DimensionMismatch(format!(
                        "term maps into {:?}, expression side {}",
                        out.shape(),
                        e.side
                    )));
                }
                let col = offsets[v.id] + k;
                match cols.get_mut(&col) {
                    Some(acc) => *acc += out,
                    None => {
                        cols.insert(col, out);
                    }
                }
            }
        }
        Ok(cols)
    }

    fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
        let err = max_abs(&(m - m.adjoint()));
        if err > 1e-10 * max_abs(m).max(1.0) {
            return Err(Error::NotHermitian(err));
        }
        Ok(())
    }

    /// Converts to the real conic standard form.
    pub fn realify(&self) -> Result<Realified> {
        let (sense, obj) = self
            .objective
            .clone()
            .ok_or_else(|| Error::InvalidInput("problem has no objective".into()))?;
        if obj.side != 1 {
            return Err(Error::InvalidInput("objective must be scalar".into()));
        }
        let mut offsets = Vec::with_capacity(self.vars.len());
        let mut n = 0;
        for v in &self.vars {
            offsets.push(n);
            n += v.ncoords();
        }
        if n == 0 {
            return Err(Error::InvalidInput("problem has no variables".into()));
        }
        let bases: Vec<Vec<ComplexMatrix>> = self.vars.iter().map(|v| var_basis(v.kind, v.side())).collect();
        let sign = if sense == Sense::Maximize { -1.0 } else { 1.0 };

        let mut cvec = DVector::zeros(n);
        for (k, m) in self.columns(&obj, &offsets, &bases)? {
            cvec[k] = sign * m[(0, 0)].re;
        }
        let offset = sign * obj.constant[(0, 0)].re;

        let mut a_rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for e in &self.eqs {
            let cols = self.columns(e, &offsets, &bases)?;
            Self::check_hermitian(&e.constant)?;
            for m in cols.values() {
                Self::check_hermitian(m)?;
            }
            let real = is_real(&e.constant) && cols.values().all(is_real);
            let rhs = hermitian_coords(&e.constant, real);
            let mut rows = vec![vec![0.0; n]; rhs.len()];
            for (k, m) in &cols {
                for (r, x) in hermitian_coords(m, real).into_iter().enumerate() {
                    rows[r][*k] = x;
                }
            }
            for (row, b) in rows.into_iter().zip(rhs) {
                if row.iter().any(|&x| x != 0.0) || b != 0.0 {
                    a_rows.push((row, -b));
                }
            }
        }

        // orthant rows first, then PSD blocks
        let mut lp_rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for (id, v) in self.vars.iter().enumerate() {
            if v.kind == VarKind::NonnegScalar {
                let mut row = vec![0.0; n];
                row[offsets[id]] = -1.0;
                lp_rows.push((row, 0.0));
            }
        }
        let mut blocks: Vec<(usize, Vec<Vec<f64>>, Vec<f64>)> = Vec::new();
        for e in &self.psds {
            let cols = self.columns(e, &offsets, &bases)?;
            Self::check_hermitian(&e.constant)?;
            for m in cols.values() {
                Self::check_hermitian(m)?;
            }
            if e.side == 1 {
                let mut row = vec![0.0; n];
                for (k, m) in &cols {
                    row[*k] = -m[(0, 0)].re;
                }
                lp_rows.push((row, e.constant[(0, 0)].re));
                continue;
            }
            let real = is_real(&e.constant) && cols.values().all(is_real);
            let to_real = |m: &ComplexMatrix| -> DMatrix<f64> {
                if real {
                    m.map(|z| z.re)
                } else {
                    embed(m)
                }
            };
            let bside = if real { e.side } else { 2 * e.side };
            let len = svec_len(bside);
            let mut gcols = vec![vec![0.0; n]; len];
            for (k, m) in &cols {
                for (r, x) in svec(&to_real(m)).iter().enumerate() {
                    gcols[r][*k] = -x;
                }
            }
            let h = svec(&to_real(&e.constant)).iter().copied().collect();
            blocks.push((bside, gcols, h));
        }

        let cones = ConeDims { nonneg: lp_rows.len(), psd: blocks.iter().map(|b| b.0).collect() };
        let mrows = cones.len();
        let mut g = DMatrix::zeros(mrows, n);
        let mut h = DVector::zeros(mrows);
        let mut r = 0;
        for (row, hv) in lp_rows {
            for (k, x) in row.into_iter().enumerate() {
                g[(r, k)] = x;
            }
            h[r] = hv;
            r += 1;
        }
        for (_, rows, hv) in blocks {
            for (row, hx) in rows.into_iter().zip(hv) {
                for (k, x) in row.into_iter().enumerate() {
                    g[(r, k)] = x;
                }
                h[r] = hx;
                r += 1;
            }
        }
        let p = a_rows.len();
        let mut a = DMatrix::zeros(p, n);
        let mut b = DVector::zeros(p);
        for (i, (row, bv)) in a_rows.into_iter().enumerate() {
            for (k, x) in row.into_iter().enumerate() {
                a[(i, k)] = x;
            }
            b[i] = bv;
        }
        Ok(Realified {
            form: StandardConicForm { c: cvec, offset, a, b, g, h, cones },
            sense,
            offsets,
        })
    }

    /// Maps a solution of the realified problem back to named values.
    pub fn interpret(&self, r: &Realified, sol: &ConicSolution) -> SolverSolution {
        let sign = if r.sense == Sense::Maximize { -1.0 } else { 1.0 };
        let mut assignments = BTreeMap::new();
        for (id, v) in self.vars.iter().enumerate() {
            let off = r.offsets[id];
            let value = match v.kind {
                VarKind::Scalar | VarKind::NonnegScalar => Value::Scalar(sol.x[off]),
                VarKind::Hermitian | VarKind::Symmetric => {
                    let n = v.side();
                    let mut m = ComplexMatrix::zeros(n, n);
                    for (k, b) in var_basis(v.kind, n).iter().enumerate() {
                        m += b * c(sol.x[off + k]);
                    }
                    match HermitianOperator::new(v.dims.clone(), m) {
                        Ok(h) => Value::Operator(h),
                        Err(_) => continue,
                    }
                }
            };
            assignments.insert(v.name.clone(), value);
        }
        SolverSolution {
            status: sol.status,
            primal_objective: sign * sol.primal_objective,
            dual_objective: sign * sol.dual_objective,
            gap: sol.gap,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            iterations: sol.iterations,
            assignments,
        }
    }

    pub fn solve(&self, opts: &SolverOptions) -> Result<SolverSolution> {
        let r = self.realify()?;
        let sol = solve(&r.form, opts)?;
        Ok(self.interpret(&r, &sol))
    }
}

fn is_real(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.im.abs() <= REAL_TOL)
}

/// Free-function form of [`SdpProblem::realify`].
pub fn realify(p: &SdpProblem) -> Result<Realified> {
    p.realify()
}

/// Free-function form of [`SolverSolution::extract`].
pub fn extract<'a>(sol: &'a SolverSolution, name: &str) -> Result<&'a Value> {
    sol.extract(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, projector};
    use num_complex::Complex64 as C;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn basis_coordinates_round_trip() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[C::new(1.0, 0.0), C::new(0.3, -0.7), C::new(0.3, 0.7), C::new(-2.0, 0.0)],
        );
        let coords = hermitian_coords(&m, false);
        let mut back = ComplexMatrix::zeros(2, 2);
        for (b, x) in var_basis(VarKind::Hermitian, 2).iter().zip(coords) {
            back += b * c(x);
        }
        assert!(max_abs(&(back - m)) < 1e-15);
    }

    #[test]
    fn embedding_round_trip_and_spectrum() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[C::new(2.0, 0.0), C::new(0.0, 1.0), C::new(0.0, -1.0), C::new(2.0, 0.0)],
        );
        let e = embed(&m);
        assert!(max_abs(&(de_embed(&e) - &m)) < 1e-15);
        let ev = crate::linalg::eigvalsh(&e).unwrap();
        assert!((ev[0] - 3.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        assert!((ev[2] - 1.0).abs() < 1e-14 && (ev[3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_state_overlap() {
        // max tr(rho X) s.t. 0 <= X <= 1 with rho = |+i><+i|
        let s = 1.0 / SQRT_2;
        let rho = projector(&[C::new(s, 0.0), C::new(0.0, s)]);
        let mut p = SdpProblem::new();
        let x = p.hermitian("X", &[2]);
        p.maximize(Expr::var(x).trace_with(&rho));
        p.psd(x);
        p.le(x, Expr::constant(ComplexMatrix::identity(2, 2)));
        let sol = p.solve(&opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective - 1.0).abs() < 1e-7);
        let xv = sol.operator("X").unwrap();
        assert!(((xv.matrix() * &rho).trace().re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn real_problem_uses_half_size_blocks() {
        let mut p = SdpProblem::new();
        let x = p.symmetric("X", &[3]);
        let w = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.5]]);
        p.maximize(Expr::var(x).trace_with(&w));
        p.psd(x);
        p.equal(Expr::var(x).trace(), Expr::real(1.0));
        let r = p.realify().unwrap();
        assert_eq!(r.form.cones.psd, vec![3]);
        let sol = p.solve(&opts()).unwrap();
        assert!((sol.primal_objective - 2.0).abs() < 1e-7);
        let mut q = SdpProblem::new();
        let y = q.hermitian("Y", &[3]);
        q.maximize(Expr::var(y).trace_with(&w));
        q.psd(y);
        q.equal(Expr::var(y).trace(), Expr::real(1.0));
        assert_eq!(q.realify().unwrap().form.cones.psd, vec![6]);
        assert!((q.solve(&opts()).unwrap().primal_objective - 2.0).abs() < 1e-7);
    }

    #[test]
    fn infeasible_psd_constraint() {
        // H - t * 0 >= 0 with H having a negative eigenvalue
        let mut p = SdpProblem::new();
        let t = p.scalar("t");
        p.minimize(t);
        let h = from_real_rows(&[&[1.0, 0.0], &[0.0, -1e-3]]);
        p.psd(Expr::var(t).kron_right(&ComplexMatrix::zeros(2, 2)) + Expr::constant(h));
        p.psd(Expr::var(t));
        let sol = p.solve(&opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.ensure_ok().is_err());
    }

    #[test]
    fn rejects_non_hermitian_and_unknown() {
        let mut p = SdpProblem::new();
        let x = p.hermitian("X", &[2]);
        let a = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        p.minimize(Expr::var(x).trace());
        p.psd(Expr::var(x).map(2, move |m| &a * m));
        assert!(matches!(p.realify(), Err(Error::NotHermitian(_))));

        let mut q = SdpProblem::new();
        let _ = q.scalar("t");
        let mut other = SdpProblem::new();
        let _ = other.scalar("a");
        let foreign = other.hermitian("B", &[2]);
        q.minimize(Expr::var(foreign).trace());
        assert!(matches!(q.realify(), Err(Error::UnknownVariable(_))));
        let sol = SolverSolution {
            status: SolveStatus::Optimal,
            primal_objective: 0.0,
            dual_objective: 0.0,
            gap: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
            assignments: BTreeMap::new(),
        };
        assert!(matches!(extract(&sol, "nope"), Err(Error::UnknownVariable(_))));
    }
}
