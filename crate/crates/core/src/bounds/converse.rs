//! Strong converse quantities: `beta`, `zeta` and the success-probability
//! bounds `f+` and `f~+`.

use super::{check_duality, eye, scaled_eye, solve_ok, BoundResult, ChoiData};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, HermitianOperator};
use crate::sdp::model::{Expr, SdpProblem, SolverSolution};
use crate::sdp::SolverOptions;

fn check_m(m: f64) -> Result<()> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::InvalidInput(format!("message count {m} must be at least 1")));
    }
    Ok(())
}

/// `min tr Z` s.t. `-R <= J^{T_B} <= R`, `-m 1 (x) Z <= R^{T_B} <= m 1 (x) Z`.
/// With `m = 1` this is `beta`.
fn beta_program(d: &ChoiData, m: f64, opts: &SolverOptions) -> Result<SolverSolution> {
    let dims = d.dims();
    let jtb = Expr::constant(d.jtb());
    let mut p = SdpProblem::new();
    let r = p.matrix("R", &dims, d.real);
    let z = p.matrix("Z", &[d.b], d.real);
    p.minimize(Expr::var(z).trace());
    p.psd(Expr::var(r) - jtb.clone());
    p.psd(Expr::var(r) + jtb);
    let rtb = Expr::var(r).ptranspose(&dims, &[1]);
    let level = Expr::var(z).kron_left(&eye(d.a)).scale(m);
    p.psd(level.clone() - rtb.clone());
    p.psd(level + rtb);
    solve_ok(&p, opts)
}

/// `min tr Z` s.t. `V >= J`, `-m 1 (x) Z <= V^{T_B} <= m 1 (x) Z`.
fn zeta_program(d: &ChoiData, m: f64, opts: &SolverOptions) -> Result<SolverSolution> {
    let dims = d.dims();
    let mut p = SdpProblem::new();
    let v = p.matrix("V", &dims, d.real);
    let z = p.matrix("Z", &[d.b], d.real);
    p.minimize(Expr::var(z).trace());
    p.ge(v, Expr::constant(d.j.clone()));
    let vtb = Expr::var(v).ptranspose(&dims, &[1]);
    let level = Expr::var(z).kron_left(&eye(d.a)).scale(m);
    p.psd(level.clone() - vtb.clone());
    p.psd(level + vtb);
    solve_ok(&p, opts)
}

/// Upper bound on the success probability with `m` messages under
/// NS and PPT codes; multiplicative under tensor products.
///
/// The primal value is returned; the dual is solved too and must agree.
pub fn f_plus(ch: &QuantumChannel, m: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_m(m)?;
    let d = ChoiData::of(ch);
    let sol = beta_program(&d, m, opts)?;
    let dual = f_plus_dual(ch, m, opts)?.value_linear;
    check_duality(sol.primal_objective, dual)?;
    BoundResult::new("fplus", ch.label())
        .param("m", m)
        .param("dual", dual)
        .linear(sol.primal_objective)
        .solved(&sol, &["R", "Z"])
}

/// Dual of [`f_plus`]: `max tr J (V - X)^{T_B}` s.t.
/// `V + X <= (W - Y)^{T_B}`, `tr_A (W + Y) <= 1/m`, all four PSD.
pub fn f_plus_dual(ch: &QuantumChannel, m: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_m(m)?;
    let d = ChoiData::of(ch);
    let dims = d.dims();
    let mut p = SdpProblem::new();
    let v = p.matrix("V", &dims, d.real);
    let x = p.matrix("X", &dims, d.real);
    let w = p.matrix("W", &dims, d.real);
    let y = p.matrix("Y", &dims, d.real);
    for var in [v, x, w, y] {
        p.psd(var);
    }
    p.maximize((Expr::var(v) - Expr::var(x)).ptranspose(&dims, &[1]).trace_with(&d.j));
    p.le(Expr::var(v) + Expr::var(x), (Expr::var(w) - Expr::var(y)).ptranspose(&dims, &[1]));
    p.le((Expr::var(w) + Expr::var(y)).ptrace(&dims, &[1]), Expr::constant(scaled_eye(d.b, 1.0 / m)));
    let sol = solve_ok(&p, opts)?;
    BoundResult::new("fplus_dual", ch.label()).param("m", m).linear(sol.primal_objective).solved(&sol, &[])
}

/// Success-probability bound built from the `zeta` program.
pub fn f_tilde_plus(ch: &QuantumChannel, m: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_m(m)?;
    let d = ChoiData::of(ch);
    let sol = zeta_program(&d, m, opts)?;
    let dual = f_tilde_plus_dual(ch, m, opts)?.value_linear;
    check_duality(sol.primal_objective, dual)?;
    BoundResult::new("ftildeplus", ch.label())
        .param("m", m)
        .param("dual", dual)
        .linear(sol.primal_objective)
        .solved(&sol, &["V", "Z"])
}

/// Dual of [`f_tilde_plus`]: `max tr J (Q - T)^{T_B}` s.t.
/// `(Q - T)^{T_B} >= 0`, `tr_A (Q + T) = 1/m`, `Q, T >= 0`.
pub fn f_tilde_plus_dual(ch: &QuantumChannel, m: f64, opts: &SolverOptions) -> Result<BoundResult> {
    check_m(m)?;
    let d = ChoiData::of(ch);
    let dims = d.dims();
    let mut p = SdpProblem::new();
    let q = p.matrix("Q", &dims, d.real);
    let t = p.matrix("T", &dims, d.real);
    p.psd(q);
    p.psd(t);
    let diff = (Expr::var(q) - Expr::var(t)).ptranspose(&dims, &[1]);
    p.maximize(diff.clone().trace_with(&d.j));
    p.psd(diff);
    p.equal((Expr::var(q) + Expr::var(t)).ptrace(&dims, &[1]), Expr::constant(scaled_eye(d.b, 1.0 / m)));
    let sol = solve_ok(&p, opts)?;
    BoundResult::new("ftildeplus_dual", ch.label()).param("m", m).linear(sol.primal_objective).solved(&sol, &[])
}

/// `beta(N)`; `value_log` is the strong converse rate `C_beta`.
///
/// Also checks `beta <= d_B ||J^{T_B}||_inf`.
pub fn beta(ch: &QuantumChannel, opts: &SolverOptions) -> Result<BoundResult> {
    let d = ChoiData::of(ch);
    let sol = beta_program(&d, 1.0, opts)?;
    let value = sol.primal_objective;
    let norm = operator_norm(&HermitianOperator::new(d.dims().to_vec(), d.jtb())?)?;
    let cap = d.b as f64 * norm;
    if value > cap + 1e-6 * cap.max(1.0) {
        return Err(Error::InvalidInput(format!("beta {value} exceeds d_B ||J^T_B|| = {cap}")));
    }
    BoundResult::new("beta", ch.label()).param("norm_bound", cap).with_log(value).solved(&sol, &["R", "Z"])
}

/// `zeta(N)`; `value_log` is `C_zeta`.
pub fn zeta(ch: &QuantumChannel, opts: &SolverOptions) -> Result<BoundResult> {
    let d = ChoiData::of(ch);
    let sol = zeta_program(&d, 1.0, opts)?;
    BoundResult::new("zeta", ch.label()).with_log(sol.primal_objective).solved(&sol, &["V", "Z"])
}

/// Lower bound `1 - f+(N, 2^r)^n` on the error probability of `n` uses at
/// rate `r`, clamped at 0.
pub fn strong_converse_decay(ch: &QuantumChannel, r: f64, n: u32, opts: &SolverOptions) -> Result<BoundResult> {
    if !(r > 0.0) || n < 1 {
        return Err(Error::InvalidInput(format!("need r > 0 and n >= 1, got r = {r}, n = {n}")));
    }
    let f = f_plus(ch, r.exp2(), opts)?.value_linear;
    let bound = (1.0 - f.powi(n as i32)).clamp(0.0, 1.0);
    Ok(BoundResult::new("decay", ch.label()).param("r", r).param("n", n as f64).param("fplus", f).linear(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{success_prob, CodeClass};
    use crate::channel::{amplitude_damping, identity, n_alpha};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn beta_and_zeta_closed_forms() {
        for d in [2, 3] {
            let r = beta(&identity(d).unwrap(), &opts()).unwrap();
            assert!((r.value_linear - d as f64).abs() < 1e-6);
        }
        for g in [0.1, 0.5, 0.9] {
            let ad = amplitude_damping(g).unwrap();
            let want = (1.0 + (1.0 - g).sqrt()).log2();
            assert!((beta(&ad, &opts()).unwrap().value() - want).abs() < 1e-6);
            assert!((zeta(&ad, &opts()).unwrap().value() - want).abs() < 1e-6);
        }
    }

    #[test]
    fn zeta_exceeds_beta_on_nalpha() {
        let ch = n_alpha(std::f64::consts::FRAC_PI_4).unwrap();
        let b = beta(&ch, &opts()).unwrap().value();
        let z = zeta(&ch, &opts()).unwrap().value();
        assert!((b - 1.0).abs() < 1e-6);
        assert!(z > b + 1e-4);
    }

    #[test]
    fn f_plus_bounds_success() {
        let ad = amplitude_damping(0.3).unwrap();
        let f = success_prob(&ad, 2, CodeClass::NsPpt, &opts()).unwrap().value_linear;
        let fp = f_plus(&ad, 2.0, &opts()).unwrap().value_linear;
        let ft = f_tilde_plus(&ad, 2.0, &opts()).unwrap().value_linear;
        assert!(f <= fp + 1e-7 && f <= ft + 1e-7);
        let dp = f_plus_dual(&ad, 2.0, &opts()).unwrap().value_linear;
        let dt = f_tilde_plus_dual(&ad, 2.0, &opts()).unwrap().value_linear;
        assert!((fp - dp).abs() < 1e-6 && (ft - dt).abs() < 1e-6);
        let b = beta(&ad, &opts()).unwrap().value_linear;
        assert!(f_plus(&ad, b, &opts()).unwrap().value_linear <= 1.0 + 1e-7);
        assert!(f_plus(&ad, 0.5, &opts()).is_err());
    }

    #[test]
    fn f_tilde_plus_nonincreasing() {
        let id = identity(2).unwrap();
        assert!(f_tilde_plus(&id, 2.0, &opts()).unwrap().value_linear <= 1.0 + 1e-7);
        let ad = amplitude_damping(0.4).unwrap();
        let vals: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|&m| f_tilde_plus(&ad, m, &opts()).unwrap().value_linear).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-7));
    }

    #[test]
    fn decay_behaviour() {
        let ad = amplitude_damping(0.5).unwrap();
        let cb = (1.0 + 0.5f64.sqrt()).log2();
        let e1 = strong_converse_decay(&ad, cb + 0.1, 1, &opts()).unwrap().value_linear;
        let e5 = strong_converse_decay(&ad, cb + 0.1, 5, &opts()).unwrap().value_linear;
        let fp = f_plus(&ad, (cb + 0.1).exp2(), &opts()).unwrap().value_linear;
        assert!((e1 - (1.0 - fp)).abs() < 1e-9);
        assert!(e1 > 1e-4 && e5 > e1);
        let low = strong_converse_decay(&ad, 0.2, 3, &opts()).unwrap().value_linear;
        assert!(low.abs() < 1e-6);
        assert!(strong_converse_decay(&ad, 0.0, 3, &opts()).is_err());
    }
}
