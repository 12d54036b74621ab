//! Quantum channels in Kraus form, their Choi matrices and
//! non-commutative graphs.
//!
//! Choi matrices are unnormalized, `J = sum_ij |i><j| (x) N(|i><j|)`, so
//! `tr J = d_in`. Input factor first, output factor second.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hs_inner, max_abs, kron, permute_subsystems, ComplexMatrix, HermitianOperator};

pub const TP_TOL: f64 = 1e-9;
pub const GRAPH_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    op: HermitianOperator,
}

impl ChoiMatrix {
    /// Wraps an operator with dims `[d_in, d_out]` after checking positivity
    /// and `tr_B J = 1_A`.
    pub fn new(op: HermitianOperator) -> Result<Self> {
        if op.dims().len() != 2 {
            return Err(Error::InvalidInput(format!("Choi dims must be [d_in, d_out], got {:?}", op.dims())));
        }
        let min = op.min_eigenvalue()?;
        if min < -TP_TOL {
            return Err(Error::NotPsd(min));
        }
        let a = op.partial_trace(&[0])?;
        let dev = max_abs(&(a.matrix() - ComplexMatrix::identity(a.side(), a.side())));
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { op })
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn d_in(&self) -> usize {
        self.op.dims()[0]
    }

    pub fn d_out(&self) -> usize {
        self.op.dims()[1]
    }

    /// True when every entry is real to within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.op.matrix().iter().all(|z| z.im.abs() <= tol)
    }
}

/// Orthonormal basis of `span{E_j^dag E_k}` under the Hilbert-Schmidt inner
/// product.
#[derive(Clone, Debug)]
pub struct NoncommutativeGraph {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl NoncommutativeGraph {
    /// Gram-Schmidt over the given spanning set, dropping vectors whose
    /// residual norm falls below `GRAPH_RANK_TOL`.
    pub fn from_spanning_set(ambient_dim: usize, span: &[ComplexMatrix]) -> Result<Self> {
        let mut basis: Vec<ComplexMatrix> = Vec::new();
        for m in span {
            if m.shape() != (ambient_dim, ambient_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "graph element {:?} in ambient dimension {ambient_dim}",
                    m.shape()
                )));
            }
            let mut r = m.clone();
            // two passes keep the basis orthonormal to ~1e-15
            for _ in 0..2 {
                for b in &basis {
                    let coef = hs_inner(b, &r)?;
                    r -= b * coef;
                }
            }
            let norm = r.norm();
            if norm > GRAPH_RANK_TOL {
                basis.push(r.unscale(norm));
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the graph.
    pub fn project(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.shape() != (self.ambient_dim, self.ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator {:?} in ambient dimension {}",
                t.shape(),
                self.ambient_dim
            )));
        }
        let mut p = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            p += b * hs_inner(b, t)?;
        }
        Ok(p)
    }

    /// Distance from `t` to the graph.
    pub fn residual(&self, t: &ComplexMatrix) -> Result<f64> {
        Ok((t - self.project(t)?).norm())
    }
}

/// Frobenius norm of the projection of `t` onto the graph; zero exactly when
/// `t` is orthogonal to it.
pub fn sperp_residual(g: &NoncommutativeGraph, t: &HermitianOperator) -> Result<f64> {
    Ok(g.project(t.matrix())?.norm())
}

#[derive(Clone, Debug)]
pub struct QuantumChannel {
    label: String,
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
    choi: ChoiMatrix,
    graph: NoncommutativeGraph,
}

impl QuantumChannel {
    pub fn new(label: impl Into<String>, d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidInput("channel dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidInput("channel needs at least one Kraus operator".into()));
        }
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (d_out, d_in) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {i} is {:?}, expected ({d_out}, {d_in})",
                    k.shape()
                )));
            }
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = max_abs(&(sum - ComplexMatrix::identity(d_in, d_in)));
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        let choi = ChoiMatrix::new(HermitianOperator::new(vec![d_in, d_out], choi_matrix(d_in, d_out, &kraus))?)?;
        let products: Vec<ComplexMatrix> =
            kraus.iter().flat_map(|ej| kraus.iter().map(move |ek| ej.adjoint() * ek)).collect();
        let graph = NoncommutativeGraph::from_spanning_set(d_in, &products)?;
        Ok(Self { label: label.into(), d_in, d_out, kraus, choi, graph })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &ChoiMatrix {
        &self.choi
    }

    pub fn ncgraph(&self) -> &NoncommutativeGraph {
        &self.graph
    }

    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        if rho.side() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {}, state side is {}",
                self.d_in,
                rho.side()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        HermitianOperator::new(vec![self.d_out], out)
    }

    pub fn complementary(&self) -> Result<QuantumChannel> {
        complementary_channel(self)
    }

    pub fn tensor(&self, other: &QuantumChannel) -> Result<QuantumChannel> {
        tensor_channels(self, other)
    }

    pub fn to_spec(&self) -> ChannelFile {
        ChannelFile {
            label: self.label.clone(),
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self
                .kraus
                .iter()
                .map(|k| (0..k.nrows()).map(|r| (0..k.ncols()).map(|c| [k[(r, c)].re, k[(r, c)].im]).collect()).collect())
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: ChannelFile = serde_json::from_str(s)?;
        spec.into_channel()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// `J = sum_k |v_k><v_k|` with `v_k = sum_i |i> (x) E_k |i>`.
fn choi_matrix(d_in: usize, d_out: usize, kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let n = d_in * d_out;
    let mut j = ComplexMatrix::zeros(n, n);
    for k in kraus {
        let v: Vec<Complex64> = (0..n).map(|idx| k[(idx % d_out, idx / d_out)]).collect();
        for r in 0..n {
            if v[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for s in 0..n {
                j[(r, s)] += v[r] * v[s].conj();
            }
        }
    }
    j
}

pub fn choi_from_kraus(ch: &QuantumChannel) -> &ChoiMatrix {
    ch.choi()
}

pub fn ncgraph(ch: &QuantumChannel) -> &NoncommutativeGraph {
    ch.ncgraph()
}

/// Kraus set `{E_i (x) F_j}`.
pub fn tensor_channels(a: &QuantumChannel, b: &QuantumChannel) -> Result<QuantumChannel> {
    let kraus = a.kraus.iter().flat_map(|e| b.kraus.iter().map(move |f| kron(e, f))).collect();
    QuantumChannel::new(
        format!("{} x {}", a.label, b.label),
        a.d_in * b.d_in,
        a.d_out * b.d_out,
        kraus,
    )
}

/// Reorders `J_a (x) J_b` from `(A1 B1 A2 B2)` to `(A1 A2 B1 B2)`.
pub fn tensor_choi(a: &ChoiMatrix, b: &ChoiMatrix) -> Result<ComplexMatrix> {
    let dims = [a.d_in(), a.d_out(), b.d_in(), b.d_out()];
    permute_subsystems(&kron(a.matrix(), b.matrix()), &dims, &[0, 2, 1, 3])
}

/// Environment output of the Stinespring dilation: `(F_k)_{ij} = (E_i)_{kj}`.
pub fn complementary_channel(ch: &QuantumChannel) -> Result<QuantumChannel> {
    let r = ch.kraus.len();
    let kraus = (0..ch.d_out)
        .map(|k| ComplexMatrix::from_fn(r, ch.d_in, |i, j| ch.kraus[i][(k, j)]))
        .collect();
    QuantumChannel::new(format!("{}^c", ch.label), ch.d_in, r, kraus)
}

fn real_matrix(n: usize, m: usize, entries: &[(usize, usize, f64)]) -> ComplexMatrix {
    let mut k = ComplexMatrix::zeros(n, m);
    for &(r, col, v) in entries {
        k[(r, col)] = c(v);
    }
    k
}

pub fn amplitude_damping(gamma: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidInput(format!("damping parameter {gamma} outside [0, 1]")));
    }
    let e0 = real_matrix(2, 2, &[(0, 0, 1.0), (1, 1, (1.0 - gamma).sqrt())]);
    let e1 = real_matrix(2, 2, &[(0, 1, gamma.sqrt())]);
    QuantumChannel::new(format!("ad:{gamma}"), 2, 2, vec![e0, e1])
}

/// Classical-quantum channel `x -> |psi_x><psi_x|` with
/// `|psi_{0,1}> = a|0> +- b|1>`.
pub fn cq_two_state(a: f64) -> Result<QuantumChannel> {
    if !(FRAC_1_SQRT_2 - 1e-12..=1.0).contains(&a) {
        return Err(Error::InvalidInput(format!("overlap parameter {a} outside [1/sqrt 2, 1]")));
    }
    let a = a.max(FRAC_1_SQRT_2);
    let b = (1.0 - a * a).max(0.0).sqrt();
    let k0 = real_matrix(2, 2, &[(0, 0, a), (1, 0, b)]);
    let k1 = real_matrix(2, 2, &[(0, 1, a), (1, 1, -b)]);
    QuantumChannel::new(format!("cq:{a}"), 2, 2, vec![k0, k1])
}

/// The output states of `cq_two_state(a)`.
pub fn cq_two_state_outputs(a: f64) -> Result<Vec<HermitianOperator>> {
    let ch = cq_two_state(a)?;
    (0..2)
        .map(|x| {
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(x, x)] = c(1.0);
            ch.apply(&HermitianOperator::from_matrix(e)?)
        })
        .collect()
}

/// Angles up to this far above `pi/4` are accepted so that `0.7854` parses.
const N_ALPHA_SLACK: f64 = 1e-4;

/// Qutrit channel with `E0 = sin a |0><1| + |1><2|`, `E1 = cos a |2><1| + |1><0|`.
pub fn n_alpha(alpha: f64) -> Result<QuantumChannel> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_4 + N_ALPHA_SLACK) {
        return Err(Error::InvalidInput(format!("angle {alpha} outside (0, pi/4]")));
    }
    let e0 = real_matrix(3, 3, &[(0, 1, alpha.sin()), (1, 2, 1.0)]);
    let e1 = real_matrix(3, 3, &[(2, 1, alpha.cos()), (1, 0, 1.0)]);
    QuantumChannel::new(format!("nalpha:{alpha}"), 3, 3, vec![e0, e1])
}

pub fn identity(d: usize) -> Result<QuantumChannel> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    QuantumChannel::new(format!("identity:{d}"), d, d, vec![ComplexMatrix::identity(d, d)])
}

/// Checks that `p[x][y]` is row-stochastic.
pub fn check_stochastic(p: &[Vec<f64>]) -> Result<(usize, usize)> {
    let nx = p.len();
    let ny = p.first().map_or(0, |r| r.len());
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("empty channel matrix".into()));
    }
    for (x, row) in p.iter().enumerate() {
        if row.len() != ny {
            return Err(Error::InvalidInput(format!("row {x} has {} entries, expected {ny}", row.len())));
        }
        if row.iter().any(|&v| !(v >= -1e-12) || !v.is_finite()) {
            return Err(Error::InvalidInput(format!("row {x} has a negative entry")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > TP_TOL {
            return Err(Error::InvalidInput(format!("row {x} sums to {s}")));
        }
    }
    Ok((nx, ny))
}

/// Kraus set `{sqrt N(y|x) |y><x|}`.
pub fn classical_channel(p: &[Vec<f64>]) -> Result<QuantumChannel> {
    let (nx, ny) = check_stochastic(p)?;
    let mut kraus = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            if p[x][y] > 0.0 {
                kraus.push(real_matrix(ny, nx, &[(y, x, p[x][y].sqrt())]));
            }
        }
    }
    QuantumChannel::new(format!("classical:{nx}x{ny}"), nx, ny, kraus)
}

/// Channel with Kraus operators cut from a Haar-random isometry
/// `C^{d_in} -> C^{d_out} (x) C^{n_kraus}`.
pub fn random_channel<R: Rng + ?Sized>(d_in: usize, d_out: usize, n_kraus: usize, rng: &mut R) -> Result<QuantumChannel> {
    if d_out * n_kraus < d_in {
        return Err(Error::InvalidInput(format!(
            "isometry {d_in} -> {d_out}*{n_kraus} does not exist"
        )));
    }
    let rows = d_out * n_kraus;
    let g = DMatrix::from_fn(rows, d_in, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d_in {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            for i in 0..rows {
                q[(i, j)] *= ph;
            }
        }
    }
    let kraus = (0..n_kraus)
        .map(|k| ComplexMatrix::from_fn(d_out, d_in, |i, j| q[(k * d_out + i, j)]))
        .collect();
    QuantumChannel::new(format!("random:{d_in}->{d_out}/{n_kraus}"), d_in, d_out, kraus)
}

/// Random row-stochastic matrix with rows drawn uniformly from the simplex.
pub fn random_stochastic<R: Rng + ?Sized>(nx: usize, ny: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..nx)
        .map(|_| {
            let w: Vec<f64> = (0..ny).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v / s).collect()
        })
        .collect()
}

/// On-disk channel description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub label: String,
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    pub fn into_channel(self) -> Result<QuantumChannel> {
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (k, rows) in self.kraus.iter().enumerate() {
            if rows.len() != self.d_out || rows.iter().any(|r| r.len() != self.d_in) {
                return Err(Error::Parse(format!(
                    "Kraus operator {k} must be {} rows of {} entries",
                    self.d_out, self.d_in
                )));
            }
            ops.push(ComplexMatrix::from_fn(self.d_out, self.d_in, |r, col| {
                let [re, im] = rows[r][col];
                Complex64::new(re, im)
            }));
        }
        QuantumChannel::new(self.label, self.d_in, self.d_out, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, projector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn ket(d: usize, i: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, i)] = c(1.0);
        m
    }

    fn state(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::from_matrix(m).unwrap()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    #[test]
    fn identity_choi_is_max_entangled() {
        let ch = identity(2).unwrap();
        let j = ch.choi().matrix();
        let mut expect = ComplexMatrix::zeros(4, 4);
        for (r, s) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expect[(r, s)] = c(1.0);
        }
        assert_eq!(j, &expect);
        assert_eq!(ch.choi().op().trace(), 2.0);
    }

    #[test]
    fn amplitude_damping_choi_by_hand() {
        let g: f64 = 0.3;
        let ch = amplitude_damping(g).unwrap();
        let s = (1.0 - g).sqrt();
        let expect = from_real_rows(&[
            &[1.0, 0.0, 0.0, s],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, g, 0.0],
            &[s, 0.0, 0.0, 1.0 - g],
        ]);
        assert!(close(ch.choi().matrix(), &expect, 1e-15));
        let out = ch.apply(&state(ket(2, 1))).unwrap();
        assert!(close(out.matrix(), &from_real_rows(&[&[g, 0.0], &[0.0, 1.0 - g]]), 1e-15));
        let b = ch.choi().op().partial_trace(&[0]).unwrap();
        assert!(close(b.matrix(), &ComplexMatrix::identity(2, 2), 1e-15));
    }

    #[test]
    fn amplitude_damping_edges() {
        let id = amplitude_damping(0.0).unwrap();
        assert!(close(id.choi().matrix(), identity(2).unwrap().choi().matrix(), 0.0));
        let full = amplitude_damping(1.0).unwrap();
        let rho = state(from_real_rows(&[&[0.3, 0.2], &[0.2, 0.7]]));
        assert!(close(full.apply(&rho).unwrap().matrix(), &ket(2, 0), 1e-15));
        assert!(amplitude_damping(1.2).is_err());
    }

    #[test]
    fn cq_channel_choi_and_overlap() {
        let a = 0.9;
        let outs = cq_two_state_outputs(a).unwrap();
        let overlap = hs_inner(outs[0].matrix(), outs[1].matrix()).unwrap().re;
        assert!((overlap - 0.62f64.powi(2)).abs() < 1e-14);
        let ch = cq_two_state(a).unwrap();
        let mut expect = kron(&ket(2, 0), outs[0].matrix());
        expect += kron(&ket(2, 1), outs[1].matrix());
        assert!(close(ch.choi().matrix(), &expect, 1e-15));
        let orth = cq_two_state_outputs(FRAC_1_SQRT_2).unwrap();
        assert!(hs_inner(orth[0].matrix(), orth[1].matrix()).unwrap().norm() < 1e-15);
        assert!(cq_two_state(0.5).is_err());
    }

    #[test]
    fn n_alpha_action() {
        let a = FRAC_PI_8;
        let ch = n_alpha(a).unwrap();
        let out = ch.apply(&state(ket(3, 1))).unwrap();
        let mut expect = ket(3, 0).scale(a.sin().powi(2));
        expect += ket(3, 2).scale(a.cos().powi(2));
        assert!(close(out.matrix(), &expect, 1e-15));
        assert!(close(ch.apply(&state(ket(3, 0))).unwrap().matrix(), &ket(3, 1), 1e-15));
        assert!(close(ch.apply(&state(ket(3, 2))).unwrap().matrix(), &ket(3, 1), 1e-15));
        assert!(n_alpha(0.0).is_err());
        assert!(n_alpha(1.0).is_err());
        assert!(n_alpha(0.7854).is_ok());
        assert!(n_alpha(0.786).is_err());
    }

    #[test]
    fn n_alpha_code_states() {
        for a in [FRAC_PI_8, FRAC_PI_4] {
            let ch = n_alpha(a).unwrap();
            let comp = ch.complementary().unwrap();
            let psi0 = projector(&[c(0.0), c(1.0), c(0.0)]);
            let psi1 = projector(&[c(a.cos()), c(0.0), c(a.sin())]);
            // dephased partner of psi1; the pure state leaks a coherence to the environment
            let rho1 = ComplexMatrix::from_diagonal(&psi1.diagonal());
            let o0 = ch.apply(&state(psi0.clone())).unwrap();
            let o1 = ch.apply(&state(rho1.clone())).unwrap();
            assert!(close(o1.matrix(), &ch.apply(&state(psi1.clone())).unwrap().into_matrix(), 1e-15));
            assert!(hs_inner(o0.matrix(), o1.matrix()).unwrap().norm() < 1e-10);
            let c0 = comp.apply(&state(psi0)).unwrap();
            let c1 = comp.apply(&state(rho1)).unwrap();
            assert!(close(c0.matrix(), c1.matrix(), 1e-10));
            let pure = comp.apply(&state(psi1)).unwrap();
            assert!(close(&ComplexMatrix::from_diagonal(&pure.matrix().diagonal()), c0.matrix(), 1e-15));
            assert!((pure.matrix()[(0, 1)].re - a.sin() * a.cos()).abs() < 1e-15);
            let mut expect = ComplexMatrix::zeros(2, 2);
            expect[(0, 0)] = c(a.sin().powi(2));
            expect[(1, 1)] = c(a.cos().powi(2));
            assert!(close(c0.matrix(), &expect, 1e-15));
        }
    }

    #[test]
    fn complementary_of_identity_is_trivial() {
        let comp = identity(2).unwrap().complementary().unwrap();
        assert_eq!(comp.d_out(), 1);
        let rho = state(from_real_rows(&[&[0.5, -0.4], &[-0.4, 0.5]]));
        let out = comp.apply(&rho).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_channels() {
        let bsc = classical_channel(&[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let d: Vec<f64> = (0..4).map(|i| bsc.choi().matrix()[(i, i)].re).collect();
        for (x, y) in d.iter().zip([0.9, 0.1, 0.1, 0.9]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(bsc.choi().is_real(0.0));
        assert!(classical_channel(&[vec![0.5, 0.6]]).is_err());
        assert!(classical_channel(&[vec![1.5, -0.5]]).is_err());
    }

    #[test]
    fn tensor_choi_matches_permuted_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let a = random_channel(2, 2, 2, &mut rng).unwrap();
            let b = random_channel(2, 3, 2, &mut rng).unwrap();
            let ab = tensor_channels(&a, &b).unwrap();
            let expect = tensor_choi(a.choi(), b.choi()).unwrap();
            assert!(close(ab.choi().matrix(), &expect, 1e-10));
        }
        let ad = tensor_channels(&amplitude_damping(0.3).unwrap(), &amplitude_damping(0.7).unwrap()).unwrap();
        let tr = ad.choi().op().partial_trace(&[0]).unwrap();
        assert!(close(tr.matrix(), &ComplexMatrix::identity(4, 4), 1e-14));
        let ii = tensor_channels(&identity(2).unwrap(), &identity(2).unwrap()).unwrap();
        assert!(close(ii.choi().matrix(), identity(4).unwrap().choi().matrix(), 0.0));
    }

    #[test]
    fn ncgraph_dimensions() {
        assert_eq!(identity(2).unwrap().ncgraph().dim(), 1);
        // n_alpha: span{sin^2|1><1| + |2><2|, cos^2|1><1| + |0><0|, |2><0|, |0><2|}
        let a = FRAC_PI_8;
        let ch = n_alpha(a).unwrap();
        let g = ch.ncgraph();
        assert_eq!(g.dim(), 4);
        for k in ch.kraus() {
            for l in ch.kraus() {
                assert!(g.residual(&(k.adjoint() * l)).unwrap() <= 1e-10);
            }
        }
        assert!(g.residual(&ComplexMatrix::identity(3, 3)).unwrap() <= 1e-10);
        assert!(g.residual(&ket(3, 0)).unwrap() > 0.1);
        for (i, x) in g.basis().iter().enumerate() {
            for (j, y) in g.basis().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((hs_inner(x, y).unwrap() - c(want)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lovasz_witness_is_orthogonal_to_graph() {
        let a = FRAC_PI_8;
        let ch = n_alpha(a).unwrap();
        let sec2 = 1.0 / a.cos().powi(2);
        let t0 = HermitianOperator::diagonal(&[-1.0, sec2, 1.0 - sec2]);
        assert!(sperp_residual(ch.ncgraph(), &t0).unwrap() < 1e-9);
        let zero = HermitianOperator::new(vec![3], ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(sperp_residual(ch.ncgraph(), &zero).unwrap(), 0.0);
        let inside = HermitianOperator::from_matrix(ComplexMatrix::identity(3, 3)).unwrap();
        assert!((sperp_residual(ch.ncgraph(), &inside).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let ch = n_alpha(0.3).unwrap();
        let text = serde_json::to_string(&ch.to_spec()).unwrap();
        let back = QuantumChannel::from_json_str(&text).unwrap();
        assert!(close(back.choi().matrix(), ch.choi().matrix(), 0.0));
        assert_eq!(back.label(), ch.label());
        let bad = r#"{"label":"x","d_in":2,"d_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]}"#;
        assert!(matches!(QuantumChannel::from_json_str(bad), Err(Error::NotTracePreserving(_))));
    }
}
