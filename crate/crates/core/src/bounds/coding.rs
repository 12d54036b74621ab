//! Success probability, one-shot capacities and zero-error message counts
//! under no-signalling codes.

use super::{check_eps, eye, scaled_eye, solve_ok, BoundResult, ChoiData, CodeClass};
use crate::channel::{check_stochastic, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, ComplexMatrix, HermitianOperator};
use crate::sdp::model::{Expr, SdpProblem, SolverSolution, Var};
use crate::sdp::SolverOptions;

/// Adds `0 <= F <= rho (x) 1` and, for PPT codes, the same bounds on `F^{T_B}`.
fn sandwich(p: &mut SdpProblem, f: Var, rho: Var, d: &ChoiData, ppt: bool) {
    let upper = Expr::var(rho).kron_right(&eye(d.b));
    p.psd(f);
    p.le(f, upper.clone());
    if ppt {
        ppt_sandwich(p, Expr::var(f), upper, d);
    }
}

fn ppt_sandwich(p: &mut SdpProblem, f: Expr, upper: Expr, d: &ChoiData) {
    let ft = f.ptranspose(&d.dims(), &[1]);
    p.psd(ft.clone());
    p.le(ft, upper);
}

/// Orthonormal basis of `ker J` as columns, and whether it is real.
fn kernel_basis(d: &ChoiData) -> Result<(ComplexMatrix, bool)> {
    let n = d.j.nrows();
    let (vals, vecs) = if d.real {
        let (vals, vecs) = eigh(&d.j.map(|z| z.re))?;
        (vals, vecs.map(c))
    } else {
        eigh(&d.j)?
    };
    let top = vals.first().copied().unwrap_or(0.0).abs().max(1.0);
    let cols: Vec<usize> = (0..n).filter(|&i| vals[i].abs() <= KERNEL_TOL * top).collect();
    let mut k = ComplexMatrix::zeros(n, cols.len());
    for (o, &i) in cols.iter().enumerate() {
        k.set_column(o, &vecs.column(i));
    }
    Ok((k, d.real))
}

/// Relative eigenvalue threshold for `ker J`.
const KERNEL_TOL: f64 = 1e-10;

/// `upper - K P K^dag` with a fresh PSD variable `P`: the operators below
/// `upper` that agree with it on the support of `J`.
fn below_on_support(p: &mut SdpProblem, upper: Expr, d: &ChoiData) -> Result<Expr> {
    let (k, real) = kernel_basis(d)?;
    if k.ncols() == 0 {
        return Ok(upper);
    }
    let pv = p.matrix("P", &[k.ncols()], real);
    p.psd(pv);
    Ok(upper - Expr::var(pv).congruence(&k))
}

/// Optimal success probability of sending `m` messages with one use of `ch`.
pub fn success_prob(ch: &QuantumChannel, m: usize, cls: CodeClass, opts: &SolverOptions) -> Result<BoundResult> {
    if m < 1 {
        return Err(Error::InvalidInput("message count must be at least 1".into()));
    }
    let d = ChoiData::of(ch);
    let mut p = SdpProblem::new();
    let f = p.matrix("F", &d.dims(), d.real);
    let rho = p.matrix("rho", &[d.a], d.real);
    p.maximize(Expr::var(f).trace_with(&d.j));
    sandwich(&mut p, f, rho, &d, cls.ppt());
    p.equal(Expr::var(rho).trace(), Expr::real(1.0));
    p.equal(Expr::var(f).ptrace(&d.dims(), &[1]), Expr::constant(scaled_eye(d.b, 1.0 / m as f64)));
    let sol = solve_ok(&p, opts)?;
    BoundResult::new(&format!("f_{}", cls.as_str()), ch.label())
        .param("m", m as f64)
        .linear(sol.primal_objective)
        .solved(&sol, &["F", "rho"])
}

/// Dual program of [`success_prob`]:
/// `min t + tr S / m` over `X, Y, W >= 0`, Hermitian `S`, with
/// `J <= X + 1 (x) S + (W - Y)^{T_B}` and `tr_B (X + W) <= t 1`.
pub fn success_prob_dual(ch: &QuantumChannel, m: usize, cls: CodeClass, opts: &SolverOptions) -> Result<BoundResult> {
    if m < 1 {
        return Err(Error::InvalidInput("message count must be at least 1".into()));
    }
    let d = ChoiData::of(ch);
    let dims = d.dims();
    let mut p = SdpProblem::new();
    let x = p.matrix("X", &dims, d.real);
    let s = p.matrix("S", &[d.b], d.real);
    let t = p.scalar("t");
    p.minimize(Expr::var(t) + Expr::var(s).trace().scale(1.0 / m as f64));
    p.psd(x);
    let mut rhs = Expr::var(x) + Expr::var(s).kron_left(&eye(d.a));
    let mut marg = Expr::var(x);
    if cls.ppt() {
        let w = p.matrix("W", &dims, d.real);
        let y = p.matrix("Y", &dims, d.real);
        p.psd(w);
        p.psd(y);
        rhs = rhs + (Expr::var(w) - Expr::var(y)).ptranspose(&dims, &[1]);
        marg = marg + Expr::var(w);
    }
    p.ge(rhs, Expr::constant(d.j.clone()));
    p.ge(Expr::var(t).kron_right(&eye(d.a)), marg.ptrace(&dims, &[0]));
    let sol = solve_ok(&p, opts)?;
    BoundResult::new(&format!("f_{}_dual", cls.as_str()), ch.label())
        .param("m", m as f64)
        .linear(sol.primal_objective)
        .solved(&sol, &["S"])
}

/// Shared program of [`one_shot_capacity`] and [`ht_bound`].
///
/// At `eps = 0` the fidelity constraint forces `J (rho (x) 1 - F) = 0`, which
/// leaves no strictly feasible point; `F` is then parametrized as in
/// [`below_on_support`] and the constraint dropped.
fn eta_program(ch: &QuantumChannel, eps: f64, ppt: bool, relaxed: bool, opts: &SolverOptions) -> Result<SolverSolution> {
    check_eps(eps)?;
    let d = ChoiData::of(ch);
    let mut p = SdpProblem::new();
    let rho = p.matrix("rho", &[d.a], d.real);
    let eta = p.scalar("eta");
    p.minimize(eta);
    let upper = Expr::var(rho).kron_right(&eye(d.b));
    let f = if eps == 0.0 {
        let f = below_on_support(&mut p, upper.clone(), &d)?;
        p.psd(f.clone());
        if ppt {
            ppt_sandwich(&mut p, f.clone(), upper, &d);
        }
        f
    } else {
        let f = p.matrix("F", &d.dims(), d.real);
        sandwich(&mut p, f, rho, &d, ppt);
        p.ge(Expr::var(f).trace_with(&d.j), Expr::real(1.0 - eps));
        Expr::var(f)
    };
    p.equal(Expr::var(rho).trace(), Expr::real(1.0));
    let marg = f.ptrace(&d.dims(), &[1]);
    let level = Expr::var(eta).kron_right(&eye(d.b));
    if relaxed {
        p.le(marg, level);
    } else {
        p.equal(marg, level);
    }
    solve_ok(&p, opts)
}

/// One-shot `eps`-error capacity: `-log2 min eta` with `tr_A F = eta 1`.
///
/// `value_linear` is the message count `1/eta`.
pub fn one_shot_capacity(ch: &QuantumChannel, eps: f64, cls: CodeClass, opts: &SolverOptions) -> Result<BoundResult> {
    let sol = eta_program(ch, eps, cls.ppt(), false, opts)?;
    BoundResult::new(&format!("c1_{}", cls.as_str()), ch.label())
        .param("eps", eps)
        .with_log(1.0 / sol.primal_objective)
        .solved(&sol, &["rho"])
}

/// Hypothesis-testing converse: the same program with `tr_A F <= eta 1`.
pub fn ht_bound(ch: &QuantumChannel, eps: f64, ppt: bool, opts: &SolverOptions) -> Result<BoundResult> {
    let sol = eta_program(ch, eps, ppt, true, opts)?;
    BoundResult::new(if ppt { "re_ppt" } else { "re" }, ch.label())
        .param("eps", eps)
        .with_log(1.0 / sol.primal_objective)
        .solved(&sol, &["rho"])
}

/// One-shot capacity of the classical-quantum channel `x -> rho_x`:
/// `max sum s_x` with `0 <= Q_x <= s_x 1`, `sum Q_x = 1` and
/// `sum tr Q_x rho_x >= (1 - eps) sum s_x`.
pub fn cq_one_shot(outputs: &[HermitianOperator], eps: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_eps(eps)?;
    let first = outputs.first().ok_or_else(|| Error::InvalidInput("no output states".into()))?;
    let n = first.side();
    for (x, r) in outputs.iter().enumerate() {
        if r.side() != n {
            return Err(Error::DimensionMismatch(format!("output {x} has side {}, expected {n}", r.side())));
        }
        if (r.trace() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("output {x} has trace {}", r.trace())));
        }
        let lo = r.min_eigenvalue()?;
        if lo < -1e-9 {
            return Err(Error::NotPsd(lo));
        }
    }
    let real = outputs.iter().all(|r| r.matrix().iter().all(|z| z.im == 0.0));
    let mut p = SdpProblem::new();
    let mut total = Expr::real(0.0);
    let mut sum_q = Expr::zero(n);
    let mut fidelity = Expr::real(0.0);
    for (x, r) in outputs.iter().enumerate() {
        let q = p.matrix(&format!("Q{x}"), &[n], real);
        let s = p.scalar(&format!("s{x}"));
        p.psd(q);
        p.le(q, Expr::var(s).kron_right(&eye(n)));
        total = total + Expr::var(s);
        sum_q = sum_q + Expr::var(q);
        fidelity = fidelity + Expr::var(q).trace_with(r.matrix());
    }
    p.maximize(total.clone());
    p.equal(sum_q, Expr::constant(eye(n)));
    p.ge(fidelity, total.scale(1.0 - eps));
    let sol = solve_ok(&p, opts)?;
    BoundResult::new("cq_one_shot", "cq")
        .param("eps", eps)
        .with_log(sol.primal_objective)
        .solved(&sol, &[])
}

/// Finite-blocklength linear program for a classical channel `p[x][y]`:
/// `max sum s_x` with `0 <= Q_xy <= s_x`, `sum_x Q_xy <= 1` and
/// `sum N(y|x) Q_xy >= (1 - eps) sum s_x`.
pub fn ppv_lp(p: &[Vec<f64>], eps: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_eps(eps)?;
    let (nx, ny) = check_stochastic(p)?;
    let mut prob = SdpProblem::new();
    let s: Vec<Var> = (0..nx).map(|x| prob.scalar(&format!("s{x}"))).collect();
    let q: Vec<Vec<Var>> =
        (0..nx).map(|x| (0..ny).map(|y| prob.nonneg(&format!("Q{x}_{y}"))).collect()).collect();
    let total = s.iter().fold(Expr::real(0.0), |acc, &v| acc + Expr::var(v));
    prob.maximize(total.clone());
    for x in 0..nx {
        for y in 0..ny {
            prob.le(q[x][y], s[x]);
        }
    }
    for y in 0..ny {
        let col = (0..nx).fold(Expr::real(0.0), |acc, x| acc + Expr::var(q[x][y]));
        prob.le(col, Expr::real(1.0));
    }
    let mut fid = Expr::real(0.0);
    for x in 0..nx {
        for y in 0..ny {
            if p[x][y] != 0.0 {
                fid = fid + Expr::var(q[x][y]).scale(p[x][y]);
            }
        }
    }
    prob.ge(fid, total.scale(1.0 - eps));
    let sol = solve_ok(&prob, opts)?;
    BoundResult::new("ppv", &format!("classical:{nx}x{ny}"))
        .param("eps", eps)
        .with_log(sol.primal_objective)
        .solved(&sol, &[])
}

/// One-shot zero-error message count: `max tr S` over
/// `0 <= U <= S (x) 1`, `tr_A U = 1`, `tr J (S (x) 1 - U) = 0`, solved with
/// `U` parametrized as in [`below_on_support`].
pub fn zero_error_m0(ch: &QuantumChannel, cls: CodeClass, opts: &SolverOptions) -> Result<BoundResult> {
    let d = ChoiData::of(ch);
    let dims = d.dims();
    let mut p = SdpProblem::new();
    let s = p.matrix("S", &[d.a], d.real);
    let upper = Expr::var(s).kron_right(&eye(d.b));
    let u = below_on_support(&mut p, upper.clone(), &d)?;
    p.maximize(Expr::var(s).trace());
    p.psd(u.clone());
    p.equal(u.clone().ptrace(&dims, &[1]), Expr::constant(eye(d.b)));
    if cls.ppt() {
        ppt_sandwich(&mut p, u, upper, &d);
    }
    let sol = solve_ok(&p, opts)?;
    BoundResult::new(&format!("m0_{}", cls.as_str()), ch.label())
        .with_log(sol.primal_objective)
        .solved(&sol, &["S"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, classical_channel, cq_two_state, cq_two_state_outputs, identity};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    fn noiseless(k: usize) -> Vec<Vec<f64>> {
        (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    }

    #[test]
    fn single_message_always_succeeds() {
        let ad = amplitude_damping(0.3).unwrap();
        for cls in [CodeClass::Ns, CodeClass::NsPpt] {
            let r = success_prob(&ad, 1, cls, &opts()).unwrap();
            assert!((r.value_linear - 1.0).abs() < 1e-6);
        }
        assert!(success_prob(&ad, 0, CodeClass::Ns, &opts()).is_err());
    }

    #[test]
    fn success_prob_small_cases() {
        let r = success_prob(&identity(2).unwrap(), 2, CodeClass::Ns, &opts()).unwrap();
        assert!((r.value_linear - 1.0).abs() < 1e-6);
        let cq = cq_two_state(1.0).unwrap();
        let r = success_prob(&cq, 2, CodeClass::NsPpt, &opts()).unwrap();
        assert!((r.value_linear - 0.5).abs() < 1e-6);
        let d = success_prob_dual(&cq, 2, CodeClass::NsPpt, &opts()).unwrap();
        assert!((d.value_linear - 0.5).abs() < 1e-6);
    }

    #[test]
    fn primal_and_dual_agree() {
        let ad = amplitude_damping(0.3).unwrap();
        for cls in [CodeClass::Ns, CodeClass::NsPpt] {
            let p = success_prob(&ad, 2, cls, &opts()).unwrap();
            let d = success_prob_dual(&ad, 2, cls, &opts()).unwrap();
            assert!((p.value_linear - d.value_linear).abs() < 1e-6);
        }
    }

    #[test]
    fn noiseless_one_shot() {
        let id = identity(2).unwrap();
        let r = one_shot_capacity(&id, 0.0, CodeClass::NsPpt, &opts()).unwrap();
        assert!((r.value() - 1.0).abs() < 1e-6);
        let r = ht_bound(&id, 0.0, true, &opts()).unwrap();
        assert!((r.value() - 1.0).abs() < 1e-6);
        // superdense coding
        let r = one_shot_capacity(&id, 0.0, CodeClass::Ns, &opts()).unwrap();
        assert!((r.value() - 2.0).abs() < 1e-6);
        let ch = classical_channel(&noiseless(3)).unwrap();
        let r = one_shot_capacity(&ch, 0.1, CodeClass::NsPpt, &opts()).unwrap();
        assert!((r.value() - (3.0 / 0.9f64).log2()).abs() < 1e-6);
        assert!(one_shot_capacity(&id, 1.0, CodeClass::Ns, &opts()).is_err());
        assert!(one_shot_capacity(&id, -0.1, CodeClass::Ns, &opts()).is_err());
    }

    #[test]
    fn ht_bound_dominates() {
        let ad = amplitude_damping(0.5).unwrap();
        let c = one_shot_capacity(&ad, 0.01, CodeClass::Ns, &opts()).unwrap();
        let h = ht_bound(&ad, 0.01, false, &opts()).unwrap();
        assert!(h.value() >= c.value() + 1e-4);
    }

    #[test]
    fn cq_formulation_matches_generic() {
        let outs = cq_two_state_outputs(0.9).unwrap();
        let a = cq_one_shot(&outs, 0.005, &opts()).unwrap();
        let b = one_shot_capacity(&cq_two_state(0.9).unwrap(), 0.005, CodeClass::Ns, &opts()).unwrap();
        assert!((a.value() - b.value()).abs() < 1e-6);
        let orth = [HermitianOperator::diagonal(&[1.0, 0.0]), HermitianOperator::diagonal(&[0.0, 1.0])];
        assert!((cq_one_shot(&orth, 0.0, &opts()).unwrap().value() - 1.0).abs() < 1e-6);
        let same = [HermitianOperator::diagonal(&[0.3, 0.7]), HermitianOperator::diagonal(&[0.3, 0.7])];
        let r = cq_one_shot(&same, 0.2, &opts()).unwrap();
        assert!((r.value_linear - 1.0 / 0.8).abs() < 1e-6);
        let bad = [HermitianOperator::diagonal(&[0.6, 0.6])];
        assert!(cq_one_shot(&bad, 0.0, &opts()).is_err());
    }

    #[test]
    fn ppv_values() {
        let r = ppv_lp(&noiseless(4), 0.25, &opts()).unwrap();
        assert!((r.value_linear - 4.0 / 0.75).abs() < 1e-6);
        let flat = vec![vec![0.2, 0.8]; 3];
        let r = ppv_lp(&flat, 0.1, &opts()).unwrap();
        assert!((r.value_linear - 1.0 / 0.9).abs() < 1e-6);
        let bsc = vec![vec![0.9, 0.1], vec![0.1, 0.9]];
        let r = ppv_lp(&bsc, 0.05, &opts()).unwrap();
        let q = one_shot_capacity(&classical_channel(&bsc).unwrap(), 0.05, CodeClass::Ns, &opts()).unwrap();
        assert!((r.value() - q.value()).abs() < 1e-6);
        assert!(ppv_lp(&[vec![0.5, 0.6]], 0.1, &opts()).is_err());
    }

    #[test]
    fn zero_error_counts() {
        let id = identity(2).unwrap();
        let r = zero_error_m0(&id, CodeClass::NsPpt, &opts()).unwrap();
        assert!((r.value_linear - 2.0).abs() < 1e-6);
        let r = zero_error_m0(&id, CodeClass::Ns, &opts()).unwrap();
        assert!((r.value_linear - 4.0).abs() < 1e-6);
        let r = zero_error_m0(&cq_two_state(0.9).unwrap(), CodeClass::Ns, &opts()).unwrap();
        assert!((r.value_linear - 1.0).abs() < 1e-6);
    }
}
