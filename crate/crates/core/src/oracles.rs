//! Reference computations for validating the reduced programs on small
//! instances: the code SDP over the full bipartite Choi matrix, link-product
//! composition, and exhaustive classical searches.

use crate::bounds::BoundResult;
use crate::channel::{check_stochastic, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, max_abs, partial_trace, partial_transpose, ComplexMatrix, HermitianOperator};
use crate::sdp::model::{Expr, SdpProblem};
use crate::sdp::SolverOptions;

/// Largest embedded block side accepted by [`full_code_success_prob`].
pub const MAX_EMBEDDED_SIDE: usize = 128;

/// Largest input alphabet accepted by [`zero_error_independent_set`].
pub const MAX_INDEPENDENT_SET_INPUTS: usize = 12;

/// Encoder count limit for [`brute_force_classical_success`].
const MAX_ENCODERS: usize = 1 << 20;

/// Choi matrix of a bipartite code on `A_i (x) A_o (x) B_i (x) B_o`.
#[derive(Clone, Debug)]
pub struct CodeChoi {
    op: HermitianOperator,
}

impl CodeChoi {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        if op.dims().len() != 4 {
            return Err(Error::DimensionMismatch(format!("code Choi needs 4 subsystems, got {:?}", op.dims())));
        }
        Ok(CodeChoi { op })
    }

    /// The code that routes `A_i` to `A_o` and `B_i` to `B_o` unchanged.
    pub fn identity(d_a: usize, d_b: usize) -> Self {
        let phi_a = max_entangled(d_a);
        let phi_b = max_entangled(d_b);
        let m = kron(&phi_a, &phi_b);
        let op = HermitianOperator::new(vec![d_a, d_a, d_b, d_b], m).expect("projector kron is Hermitian");
        CodeChoi { op }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    /// `[A_i, A_o, B_i, B_o]`.
    pub fn dims(&self) -> [usize; 4] {
        let d = self.op.dims();
        [d[0], d[1], d[2], d[3]]
    }

    /// Largest violation over the code constraints: positivity, trace
    /// preservation, both no-signalling marginals and, if `ppt`, positivity
    /// of the transpose on `B_i B_o`.
    pub fn violation(&self, ppt: bool) -> Result<f64> {
        let dims = self.dims();
        let [ai, _, bi, _] = dims;
        let z = self.op.matrix();
        let mut worst = (-self.op.min_eigenvalue()?).max(0.0);
        let tp = partial_trace(z, &dims, &[0, 2])? - ComplexMatrix::identity(ai * bi, ai * bi);
        worst = worst.max(max_abs(&tp));
        let a_to_b = partial_trace(z, &dims, &[0, 2, 3])? - kron(&eye_scaled(ai), &partial_trace(z, &dims, &[2, 3])?);
        worst = worst.max(max_abs(&a_to_b));
        let b_to_a = partial_trace(z, &dims, &[0, 1, 2])? - kron(&partial_trace(z, &dims, &[0, 1])?, &eye_scaled(bi));
        worst = worst.max(max_abs(&b_to_a));
        if ppt {
            let pt = HermitianOperator::new(dims.to_vec(), partial_transpose(z, &dims, &[2, 3])?)?;
            worst = worst.max((-pt.min_eigenvalue()?).max(0.0));
        }
        Ok(worst)
    }
}

fn max_entangled(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, 1);
    for i in 0..d {
        v[(i * d + i, 0)] = c(1.0);
    }
    &v * v.adjoint()
}

fn eye_scaled(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_diagonal_element(n, n, c(1.0 / n as f64))
}

/// `J^T` on `A_o B_i` embedded as `1_{A_i} (x) J^T (x) 1_{B_o}`.
fn lifted_choi_transpose(ch: &QuantumChannel, ai: usize, bo: usize) -> ComplexMatrix {
    let jt = ch.choi().matrix().transpose();
    kron(&kron(&ComplexMatrix::identity(ai, ai), &jt), &ComplexMatrix::identity(bo, bo))
}

/// Choi matrix on `A_i (x) B_o` of the channel obtained by plugging `ch`
/// into the code `z`: `tr_{A_o B_i} (J^T (x) 1) Z`.
pub fn compose_choi(ch: &QuantumChannel, z: &CodeChoi) -> Result<HermitianOperator> {
    let dims = z.dims();
    let [ai, ao, bi, bo] = dims;
    if ao != ch.d_in() || bi != ch.d_out() {
        return Err(Error::DimensionMismatch(format!(
            "code expects a {ao} -> {bi} channel, got {} -> {}",
            ch.d_in(),
            ch.d_out()
        )));
    }
    let prod = lifted_choi_transpose(ch, ai, bo) * z.op().matrix();
    let jm = partial_trace(&prod, &dims, &[0, 3])?;
    HermitianOperator::with_tolerance(vec![ai, bo], jm, 1e-8)
}

/// `sum_k |kk><kk|` on `A_i (x) B_o` with both of side `m`.
pub fn diagonal_projector(m: usize) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(m * m, m * m);
    for k in 0..m {
        d[(k * m + k, k * m + k)] = c(1.0);
    }
    d
}

/// Average success probability `tr(J_M D) / m` of the composed channel.
pub fn composed_success(ch: &QuantumChannel, z: &CodeChoi) -> Result<f64> {
    let jm = compose_choi(ch, z)?;
    let m = z.dims()[0];
    Ok((jm.matrix() * diagonal_projector(m)).trace().re / m as f64)
}

/// Optimal success probability over all no-signalling codes (and
/// PPT-preserving ones if `ppt`), optimizing the full code Choi matrix
/// without any symmetry reduction. The optimal code is kept as witness `Z`.
pub fn full_code_success_prob(ch: &QuantumChannel, m: usize, ppt: bool, opts: &SolverOptions) -> Result<BoundResult> {
    if m < 1 {
        return Err(Error::InvalidInput("message count must be at least 1".into()));
    }
    let (a, b) = (ch.d_in(), ch.d_out());
    let dims = [m, a, b, m];
    let side = m * a * b * m;
    let real = ch.choi().is_real(1e-14);
    let embedded = if real { side } else { 2 * side };
    if embedded > MAX_EMBEDDED_SIDE {
        return Err(Error::TooLarge(format!("embedded side {embedded} > {MAX_EMBEDDED_SIDE}")));
    }

    let mut p = SdpProblem::new();
    let z = p.matrix("Z", &dims, real);
    let zx = || Expr::var(z);
    // D on A_i B_o folded into the lifted J^T
    let mut dmask = ComplexMatrix::zeros(side, side);
    for k in 0..m {
        let proj_k = {
            let mut e = ComplexMatrix::zeros(m, m);
            e[(k, k)] = c(1.0);
            e
        };
        dmask += kron(&kron(&proj_k, &ComplexMatrix::identity(a * b, a * b)), &proj_k);
    }
    let w = lifted_choi_transpose(ch, m, m) * dmask;
    p.maximize(zx().trace_with(&w).scale(1.0 / m as f64));

    p.psd(z);
    p.equal(zx().ptrace(&dims, &[0, 2]), Expr::constant(ComplexMatrix::identity(m * b, m * b)));
    p.equal(zx().ptrace(&dims, &[0, 2, 3]), zx().ptrace(&dims, &[2, 3]).kron_left(&eye_scaled(m)));
    p.equal(zx().ptrace(&dims, &[0, 1, 2]), zx().ptrace(&dims, &[0, 1]).kron_right(&eye_scaled(b)));
    if ppt {
        p.psd(zx().ptranspose(&dims, &[2, 3]));
    }
    let sol = p.solve(opts)?;
    sol.ensure_ok()?;
    let name = if ppt { "full_code_nsppt" } else { "full_code_ns" };
    BoundResult::new(name, ch.label()).param("m", m as f64).linear(sol.primal_objective).solved(&sol, &["Z"])
}

/// Best average success of an unassisted deterministic code: every encoder
/// `{0..m} -> X` is enumerated and decoded by maximum likelihood, which is
/// optimal among decoders for a fixed encoder.
pub fn brute_force_classical_success(p: &[Vec<f64>], m: usize) -> Result<f64> {
    let (nx, ny) = check_stochastic(p)?;
    if m < 1 {
        return Err(Error::InvalidInput("message count must be at least 1".into()));
    }
    let count = (nx as u128).checked_pow(m as u32).filter(|&n| n <= MAX_ENCODERS as u128);
    let Some(count) = count else {
        return Err(Error::TooLarge(format!("{nx}^{m} encoders")));
    };
    let mut best = 0.0f64;
    let mut enc = vec![0usize; m];
    for mut idx in 0..count as usize {
        for slot in enc.iter_mut() {
            *slot = idx % nx;
            idx /= nx;
        }
        let total: f64 = (0..ny).map(|y| enc.iter().map(|&x| p[x][y]).fold(0.0, f64::max)).sum();
        best = best.max(total / m as f64);
    }
    Ok(best)
}

/// Size of the largest set of inputs no two of which can produce a common
/// output, by branch and bound on the confusability graph.
pub fn zero_error_independent_set(p: &[Vec<f64>]) -> Result<usize> {
    let (nx, ny) = check_stochastic(p)?;
    if nx > MAX_INDEPENDENT_SET_INPUTS {
        return Err(Error::TooLarge(format!("{nx} inputs > {MAX_INDEPENDENT_SET_INPUTS}")));
    }
    let mut adj = vec![0u32; nx];
    for x in 0..nx {
        for x2 in 0..nx {
            if x != x2 && (0..ny).any(|y| p[x][y] > 0.0 && p[x2][y] > 0.0) {
                adj[x] |= 1 << x2;
            }
        }
    }
    let mut best = 0;
    branch(&adj, (1u32 << nx) - 1, 0, &mut best);
    Ok(best)
}

fn branch(adj: &[u32], candidates: u32, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    branch(adj, rest & !adj[v], size + 1, best);
    branch(adj, rest, size, best);
}
