//! The acceptance self-test: each criterion recomputes its quantities from
//! scratch and compares them with closed forms, independent references or
//! the orderings they must satisfy.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bounds::{self, CodeClass};
use crate::channel::{self, QuantumChannel};
use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, HermitianOperator};
use crate::oracles;
use crate::sdp::model::{Expr, SdpProblem};
use crate::sdp::SolverOptions;

/// Seed used when `QCAP_SEED` is not set.
pub const DEFAULT_SEED: u64 = 7;

/// Comparison tally for one criterion.
#[derive(Default)]
struct Tally {
    ok: bool,
    checks: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { ok: true, ..Default::default() }
    }

    fn fail(&mut self, msg: String) {
        self.ok = false;
        self.first_failure.get_or_insert(msg);
    }

    /// `|got - want| <= tol`.
    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.checks += 1;
        let dev = (got - want).abs();
        if dev.is_nan() || dev > tol {
            self.fail(format!("{what}: {got} vs {want} (tol {tol:e})"));
        }
        if dev.is_finite() {
            self.worst = self.worst.max(dev);
        }
    }

    /// `lo <= hi + slack`.
    fn le(&mut self, what: &str, lo: f64, hi: f64, slack: f64) {
        self.checks += 1;
        if !(lo <= hi + slack) {
            self.fail(format!("{what}: {lo} > {hi}"));
        }
    }

    fn holds(&mut self, what: &str, cond: bool) {
        self.checks += 1;
        if !cond {
            self.fail(what.to_string());
        }
    }

    fn finish(self, extra: String) -> (bool, String) {
        let mut d = format!("{} checks, max deviation {:.1e}", self.checks, self.worst);
        if !extra.is_empty() {
            d = format!("{d}; {extra}");
        }
        if let Some(f) = self.first_failure {
            d = format!("{d}; first failure: {f}");
        }
        (self.ok, d)
    }
}

pub struct Ctx {
    pub opts: SolverOptions,
    pub seed: u64,
}

type Check = Result<(bool, String)>;

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    /// Set for criteria known not to hold; the reason is printed with the
    /// failure.
    pub known_failure: Option<&'static str>,
    run: fn(&Ctx) -> Check,
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub known_failure: Option<&'static str>,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// `PASS`/`FAIL` line without timing, stable across runs.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{tag}] {:<3} {} ({})", self.id, self.title, self.detail);
        if let (false, Some(why)) = (self.passed, self.known_failure) {
            s.push_str(&format!(" [known: {why}]"));
        }
        s
    }
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: "1", title: "amplitude damping: C_beta = C_zeta = log2(1 + sqrt(1 - gamma))", known_failure: None, run: c1 },
    Criterion { id: "2", title: "identity channels: beta = zeta = d", known_failure: None, run: c2 },
    Criterion { id: "3", title: "N_alpha: C_beta = 1 < C_zeta, M0 = 2, witness value 1 + 1/cos^2(alpha)", known_failure: None, run: c3 },
    Criterion { id: "4", title: "additivity of C_beta under tensor products", known_failure: None, run: c4 },
    Criterion { id: "5", title: "full code program equals the reduced success probability", known_failure: None, run: c5 },
    Criterion { id: "6", title: "primal and dual programs agree", known_failure: None, run: c6 },
    Criterion { id: "7", title: "bound orderings on the channel suite", known_failure: None, run: c7 },
    Criterion { id: "8", title: "R_E strictly above C1_NS somewhere on the AD and cq sweeps", known_failure: None, run: c8 },
    Criterion { id: "9", title: "classical channels: C1_NS = C1_NSPPT = PPV; noiseless k gives k/(1-eps)", known_failure: None, run: c9 },
    Criterion { id: "10", title: "zero-error count equals 2^C1 at eps = 0; pentagon 5/2 vs independent set 2", known_failure: None, run: c10 },
    Criterion { id: "11", title: "f_NSPPT(AD0.3 x AD0.3, 4) <= f+(AD0.3, 2)^2", known_failure: None, run: c11 },
    Criterion { id: "12a", title: "AD0.5 at r = C_beta + 0.1: f+(2^r) <= 1 - 1e-4", known_failure: None, run: c12a },
    Criterion {
        id: "12b",
        title: "AD0.5 at r = C_beta + 0.1: error lower bound at n = 50 exceeds 0.99",
        known_failure: Some("f+(N, m) = beta/m, so f+(2^r) = 2^-0.1 and 1 - 2^-5 = 0.96875 < 0.99"),
        run: c12b,
    },
    Criterion { id: "13", title: "C_beta(AD) below the EA search for gamma <= 0.75; Holevo lower bound below C_beta", known_failure: None, run: c13 },
    Criterion { id: "14", title: "solver: lambda_max and trace norm SDPs vs eigen/SVD; bit-identical reruns", known_failure: None, run: c14 },
];

/// Runs one criterion by id.
pub fn run_criterion(id: &str, opts: &SolverOptions, seed: u64) -> Option<CriterionOutcome> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    Some(evaluate(c, &Ctx { opts: *opts, seed }))
}

/// Runs every criterion in order.
pub fn run_selftest(opts: &SolverOptions, seed: u64) -> Vec<CriterionOutcome> {
    let ctx = Ctx { opts: *opts, seed };
    CRITERIA.iter().map(|c| evaluate(c, &ctx)).collect()
}

fn evaluate(c: &Criterion, ctx: &Ctx) -> CriterionOutcome {
    let t = std::time::Instant::now();
    let (passed, detail) = match (c.run)(ctx) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id: c.id, title: c.title, passed, detail, known_failure: c.known_failure, seconds: t.elapsed().as_secs_f64() }
}

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| format!("{:.11e}", start + i as f64 * step).parse().unwrap()).collect()
}

fn random_qubit_channels(seed: u64, count: usize) -> Result<Vec<QuantumChannel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| Ok(channel::random_channel(2, 2, 2, &mut rng)?.with_label(format!("random{i}"))))
        .collect()
}

/// AD(0.3), cq(0.9), N_alpha(pi/8) and five seeded random qubit channels.
pub fn channel_suite(seed: u64) -> Result<Vec<QuantumChannel>> {
    let mut v = vec![channel::amplitude_damping(0.3)?, channel::cq_two_state(0.9)?, channel::n_alpha(FRAC_PI_8)?];
    v.extend(random_qubit_channels(seed, 5)?);
    Ok(v)
}

fn ad_cbeta(g: f64) -> f64 {
    (1.0 + (1.0 - g).sqrt()).log2()
}

fn c1(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    for g in steps(0.0, 1.0, 0.1) {
        let ch = channel::amplitude_damping(g)?;
        t.close(&format!("C_beta(AD{g})"), bounds::beta(&ch, &ctx.opts)?.value(), ad_cbeta(g), 1e-6);
        t.close(&format!("C_zeta(AD{g})"), bounds::zeta(&ch, &ctx.opts)?.value(), ad_cbeta(g), 1e-6);
    }
    Ok(t.finish(String::new()))
}

fn c2(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    for d in 2..=4 {
        let ch = channel::identity(d)?;
        t.close(&format!("beta(I{d})"), bounds::beta(&ch, &ctx.opts)?.value_linear, d as f64, 1e-7);
        t.close(&format!("zeta(I{d})"), bounds::zeta(&ch, &ctx.opts)?.value_linear, d as f64, 1e-7);
    }
    Ok(t.finish(String::new()))
}

fn c3(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let mut min_zeta = f64::INFINITY;
    for a in [FRAC_PI_8 / 2.0, FRAC_PI_8, FRAC_PI_4] {
        let ch = channel::n_alpha(a)?;
        t.close(&format!("C_beta(N_{a:.4})"), bounds::beta(&ch, &ctx.opts)?.value(), 1.0, 1e-6);
        let cz = bounds::zeta(&ch, &ctx.opts)?.value();
        min_zeta = min_zeta.min(cz);
        t.le(&format!("1 + 1e-4 <= C_zeta(N_{a:.4})"), 1.0 + 1e-4, cz, 0.0);
        let m0 = bounds::zero_error_m0(&ch, CodeClass::NsPpt, &ctx.opts)?.value_linear;
        t.close(&format!("M0_NSPPT(N_{a:.4})"), m0, 2.0, 1e-5);
        let k = 1.0 / (a.cos() * a.cos());
        let w = HermitianOperator::diagonal(&[-1.0, k, 1.0 - k]);
        let v = bounds::lovasz_witness_value(&ch, &w)?;
        t.close(&format!("witness value N_{a:.4}"), v, 1.0 + k, 1e-9);
        t.holds(&format!("witness value {v} > 2"), v > 2.0);
        if a == FRAC_PI_4 {
            t.close("witness value at pi/4", v, 3.0, 1e-9);
        }
    }
    Ok(t.finish(format!("min C_zeta {min_zeta:.6}")))
}

fn c4(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let a = random_qubit_channels(ctx.seed.wrapping_add(1), 5)?;
    let b = random_qubit_channels(ctx.seed.wrapping_add(2), 5)?;
    let mut pairs: Vec<(QuantumChannel, QuantumChannel)> = a.into_iter().zip(b).collect();
    pairs.push((channel::amplitude_damping(0.3)?, channel::amplitude_damping(0.3)?));
    pairs.push((channel::amplitude_damping(0.3)?, channel::amplitude_damping(0.7)?));
    for (x, y) in &pairs {
        let joint = bounds::beta(&x.tensor(y)?, &ctx.opts)?.value();
        let sum = bounds::beta(x, &ctx.opts)?.value() + bounds::beta(y, &ctx.opts)?.value();
        t.close(&format!("C_beta({} x {})", x.label(), y.label()), joint, sum, 1e-5);
    }
    Ok(t.finish(String::new()))
}

fn c5(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    for ch in random_qubit_channels(ctx.seed, 5)? {
        for cls in [CodeClass::NsPpt, CodeClass::Ns] {
            let full = oracles::full_code_success_prob(&ch, 2, cls.ppt(), &ctx.opts)?.value_linear;
            let reduced = bounds::success_prob(&ch, 2, cls, &ctx.opts)?.value_linear;
            t.close(&format!("{} {}", ch.label(), cls.as_str()), full, reduced, 1e-5);
        }
    }
    Ok(t.finish(String::new()))
}

fn c6(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    for ch in channel_suite(ctx.seed)? {
        for cls in [CodeClass::NsPpt, CodeClass::Ns] {
            let p = bounds::success_prob(&ch, 2, cls, &ctx.opts)?.value_linear;
            let d = bounds::success_prob_dual(&ch, 2, cls, &ctx.opts)?.value_linear;
            t.close(&format!("f_{} {}", cls.as_str(), ch.label()), p, d, 1e-6);
        }
        let p = bounds::f_plus(&ch, 2.0, &ctx.opts)?.value_linear;
        let d = bounds::f_plus_dual(&ch, 2.0, &ctx.opts)?.value_linear;
        t.close(&format!("f+ {}", ch.label()), p, d, 1e-6);
    }
    Ok(t.finish(String::new()))
}

fn c7(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let slack = 1e-7;
    for ch in channel_suite(ctx.seed)? {
        let l = ch.label().to_string();
        for eps in [0.0, 0.01, 0.1] {
            let ppt = bounds::one_shot_capacity(&ch, eps, CodeClass::NsPpt, &ctx.opts)?.value();
            let ns = bounds::one_shot_capacity(&ch, eps, CodeClass::Ns, &ctx.opts)?.value();
            let re = bounds::ht_bound(&ch, eps, false, &ctx.opts)?.value();
            let re_ppt = bounds::ht_bound(&ch, eps, true, &ctx.opts)?.value();
            t.le(&format!("C1_NSPPT <= C1_NS, {l} eps {eps}"), ppt, ns, slack);
            t.le(&format!("C1_NS <= R_E, {l} eps {eps}"), ns, re, slack);
            t.le(&format!("C1_NSPPT <= R_E_PPT, {l} eps {eps}"), ppt, re_ppt, slack);
        }
        for m in [2usize, 3] {
            let f = bounds::success_prob(&ch, m, CodeClass::NsPpt, &ctx.opts)?.value_linear;
            let fp = bounds::f_plus(&ch, m as f64, &ctx.opts)?.value_linear;
            let ft = bounds::f_tilde_plus(&ch, m as f64, &ctx.opts)?.value_linear;
            t.le(&format!("f_NSPPT <= f+, {l} m {m}"), f, fp, slack);
            t.le(&format!("f_NSPPT <= f~+, {l} m {m}"), f, ft, slack);
        }
    }
    Ok(t.finish(String::new()))
}

fn largest_gap(chs: Vec<QuantumChannel>, eps: f64, opts: &SolverOptions) -> Result<(f64, String)> {
    let mut best = (f64::NEG_INFINITY, String::new());
    for ch in chs {
        let re = bounds::ht_bound(&ch, eps, false, opts)?.value();
        let ns = bounds::one_shot_capacity(&ch, eps, CodeClass::Ns, opts)?.value();
        if re - ns > best.0 {
            best = (re - ns, ch.label().to_string());
        }
    }
    Ok(best)
}

fn c8(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let ad: Vec<_> = steps(0.0, 1.0, 0.05).into_iter().map(channel::amplitude_damping).collect::<Result<_>>()?;
    let (g_ad, at_ad) = largest_gap(ad, 0.01, &ctx.opts)?;
    t.le("max R_E - C1_NS on AD sweep at eps 0.01", 1e-4, g_ad, 0.0);
    let cq: Vec<_> = steps(0.72, 1.0, 0.02).into_iter().map(channel::cq_two_state).collect::<Result<_>>()?;
    let (g_cq, at_cq) = largest_gap(cq, 0.005, &ctx.opts)?;
    t.le("max R_E - C1_NS on cq sweep at eps 0.005", 1e-4, g_cq, 0.0);
    Ok(t.finish(format!("largest gaps {g_ad:.4} at {at_ad}, {g_cq:.4} at {at_cq}")))
}

fn c9(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(3));
    for i in 0..5 {
        let nx = rng.random_range(2..=4);
        let ny = rng.random_range(2..=4);
        let p = channel::random_stochastic(nx, ny, &mut rng);
        let ch = channel::classical_channel(&p)?;
        for eps in [0.0, 0.1, 0.25] {
            let ns = bounds::one_shot_capacity(&ch, eps, CodeClass::Ns, &ctx.opts)?.value();
            let ppt = bounds::one_shot_capacity(&ch, eps, CodeClass::NsPpt, &ctx.opts)?.value();
            let lp = bounds::ppv_lp(&p, eps, &ctx.opts)?.value();
            t.close(&format!("C1_NS vs PPV, stochastic {i} ({nx}x{ny}) eps {eps}"), ns, lp, 1e-6);
            t.close(&format!("C1_NSPPT vs PPV, stochastic {i} ({nx}x{ny}) eps {eps}"), ppt, lp, 1e-6);
        }
    }
    for k in 2..=4usize {
        let p: Vec<Vec<f64>> = (0..k).map(|x| (0..k).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
        let ch = channel::classical_channel(&p)?;
        for eps in [0.0, 0.1, 0.25] {
            let v = bounds::one_shot_capacity(&ch, eps, CodeClass::Ns, &ctx.opts)?.value_linear;
            t.close(&format!("noiseless {k} eps {eps}"), v, k as f64 / (1.0 - eps), 1e-7);
        }
    }
    Ok(t.finish(String::new()))
}

pub fn pentagon() -> Vec<Vec<f64>> {
    (0..5)
        .map(|x| {
            let mut row = vec![0.0; 5];
            row[x] = 0.5;
            row[(x + 1) % 5] = 0.5;
            row
        })
        .collect()
}

fn c10(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    for ch in channel_suite(ctx.seed)? {
        for cls in [CodeClass::Ns, CodeClass::NsPpt] {
            let m0 = bounds::zero_error_m0(&ch, cls, &ctx.opts)?.value_linear;
            let c = bounds::one_shot_capacity(&ch, 0.0, cls, &ctx.opts)?.value_linear;
            t.close(&format!("M0_{} {}", cls.as_str(), ch.label()), m0, c, 1e-6);
        }
    }
    let p = pentagon();
    let m0 = bounds::zero_error_m0(&channel::classical_channel(&p)?, CodeClass::Ns, &ctx.opts)?.value_linear;
    t.close("pentagon M0_NS", m0, 2.5, 1e-6);
    let alpha = oracles::zero_error_independent_set(&p)?;
    t.holds(&format!("pentagon independence number {alpha} == 2"), alpha == 2);
    Ok(t.finish(String::new()))
}

fn c11(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let ad = channel::amplitude_damping(0.3)?;
    let f2 = bounds::success_prob(&ad.tensor(&ad)?, 4, CodeClass::NsPpt, &ctx.opts)?.value_linear;
    let fp = bounds::f_plus(&ad, 2.0, &ctx.opts)?.value_linear;
    t.le("f_NSPPT(AD0.3^2, 4) <= f+(AD0.3, 2)^2", f2, fp * fp, 1e-6);
    Ok(t.finish(format!("{f2:.9} vs {:.9}", fp * fp)))
}

fn decay_setup(ctx: &Ctx) -> Result<(QuantumChannel, f64)> {
    let ad = channel::amplitude_damping(0.5)?;
    let r = bounds::beta(&ad, &ctx.opts)?.value() + 0.1;
    Ok((ad, r))
}

fn c12a(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let (ad, r) = decay_setup(ctx)?;
    let f = bounds::f_plus(&ad, r.exp2(), &ctx.opts)?.value_linear;
    t.le("f+(AD0.5, 2^r) <= 1 - 1e-4", f, 1.0 - 1e-4, 0.0);
    Ok(t.finish(format!("f+ = {f:.9}")))
}

fn c12b(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let (ad, r) = decay_setup(ctx)?;
    let e = bounds::strong_converse_decay(&ad, r, 50, &ctx.opts)?.value_linear;
    t.le("error lower bound at n = 50 > 0.99", 0.99, e, 0.0);
    Ok(t.finish(format!("bound = {e:.9}")))
}

fn c13(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let mut min_margin = f64::INFINITY;
    for g in steps(0.0, 1.0, 0.05) {
        let ch = channel::amplitude_damping(g)?;
        let cb = bounds::beta(&ch, &ctx.opts)?.value();
        if g <= 0.75 + 1e-12 {
            let ea = bounds::ea_capacity_search(&ch)?.value();
            min_margin = min_margin.min(ea - cb);
            t.le(&format!("C_beta < EA search at gamma {g}"), cb, ea, 0.0);
            t.holds(&format!("C_beta != EA search at gamma {g}"), cb < ea);
        }
        t.le(&format!("Holevo lower <= C_beta at gamma {g}"), bounds::ad_holevo_lower(g)?, cb, 1e-7);
    }
    Ok(t.finish(format!("min EA - C_beta {min_margin:.4}")))
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        num_complex::Complex64::new(re, im)
    });
    (&g + g.adjoint()).scale(0.5)
}

fn lambda_max_sdp(h: &ComplexMatrix, opts: &SolverOptions) -> Result<(f64, Vec<u64>)> {
    let n = h.nrows();
    let mut p = SdpProblem::new();
    let s = p.scalar("t");
    p.minimize(s);
    p.psd(Expr::var(s).kron_left(&ComplexMatrix::identity(n, n)) - Expr::constant(h.clone()));
    let sol = p.solve(opts)?;
    sol.ensure_ok()?;
    Ok((sol.primal_objective, vec![sol.primal_objective.to_bits(), sol.dual_objective.to_bits(), sol.scalar("t")?.to_bits()]))
}

fn trace_norm_sdp(h: &ComplexMatrix, opts: &SolverOptions) -> Result<(f64, Vec<u64>)> {
    let n = h.nrows();
    let mut p = SdpProblem::new();
    let a = p.hermitian("P", &[n]);
    let b = p.hermitian("N", &[n]);
    p.minimize(Expr::var(a).trace() + Expr::var(b).trace());
    p.psd(a);
    p.psd(b);
    p.equal(Expr::var(a) - Expr::var(b), Expr::constant(h.clone()));
    let sol = p.solve(opts)?;
    sol.ensure_ok()?;
    let bits = sol.operator("P")?.matrix().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
    Ok((sol.primal_objective, bits))
}

fn c14(ctx: &Ctx) -> Check {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(4));
    for i in 0..10 {
        let n = 2 + i % 7;
        let h = random_hermitian(n, &mut rng);
        let eig = HermitianOperator::from_matrix(h.clone())?.eigenvalues()?;
        let top = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (lm, bits1) = lambda_max_sdp(&h, &ctx.opts)?;
        t.close(&format!("lambda_max side {n}"), lm, top, 1e-7);
        let (tn, bits2) = trace_norm_sdp(&h, &ctx.opts)?;
        t.close(&format!("trace norm side {n}"), tn, linalg::trace_norm(&h)?, 1e-7);
        t.holds(&format!("bit-identical lambda_max rerun side {n}"), lambda_max_sdp(&h, &ctx.opts)?.1 == bits1);
        t.holds(&format!("bit-identical trace norm rerun side {n}"), trace_norm_sdp(&h, &ctx.opts)?.1 == bits2);
    }
    Ok(t.finish(String::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = CRITERIA.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CRITERIA.len());
        assert!(CRITERIA.len() >= 12);
    }

    #[test]
    fn tally_reports_first_failure() {
        let mut t = Tally::new();
        t.close("a", 1.0, 1.0 + 1e-9, 1e-8);
        t.le("b", 2.0, 1.0, 0.5);
        t.close("c", f64::NAN, 0.0, 1.0);
        let (ok, d) = t.finish(String::new());
        assert!(!ok);
        assert!(d.contains("first failure: b"));
    }

    #[test]
    fn steps_are_clean() {
        let s = steps(0.0, 1.0, 0.1);
        assert_eq!(s.len(), 11);
        assert_eq!(s[7], 0.7);
        assert_eq!(steps(0.72, 1.0, 0.02).len(), 15);
    }
}
