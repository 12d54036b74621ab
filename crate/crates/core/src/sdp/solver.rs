//! Primal-dual interior-point method on the homogeneous self-dual embedding
//! with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
//!
//! Cone variables are kept in scaled form: for every PSD block
//! `s = R diag(l) R^T` and `z = R^-T diag(l) R^-1`, for the orthant
//! `s = w l` and `z = l / w`.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::cone::{smat, svec_into, svec_len, ConeDims};
use super::form::{presolve, Presolved, StandardConicForm};
use super::SolveStatus;
use crate::error::{Error, Result};
use crate::linalg::eigvalsh;

const STEP_FRACTION: f64 = 0.98;
const CENTERING_EXPONENT: i32 = 3;
const MAX_REG_ATTEMPTS: usize = 3;
/// Looser tolerances accepted as `NearOptimal` when progress stalls.
const NEAR_FACTOR: f64 = 1e3;
/// Iterations without a better merit value before giving up.
const STALL_ITERS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { feas_tol: 1e-8, gap_tol: 1e-8, max_iter: 200 }
    }
}

/// Raw solver output in the coordinates of a [`StandardConicForm`].
#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub x: DVector<f64>,
    pub s: DVector<f64>,
    pub z: DVector<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `max(s^T z, |pcost - dcost|) / max(1, |pcost|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

struct BlockScaling {
    n: usize,
    r: DMatrix<f64>,
    rinv: DMatrix<f64>,
    lambda: Vec<f64>,
}

struct Scaling {
    cones: ConeDims,
    offsets: Vec<usize>,
    w: Vec<f64>,
    lp_lambda: Vec<f64>,
    blocks: Vec<BlockScaling>,
}

#[derive(Clone, Copy)]
enum Op {
    /// scaled -> s space: `R u R^T`
    T,
    /// `R^-1 u R^-T`
    TInv,
    /// `R^T u R`
    TStar,
    /// z space <- scaled: `R^-T u R^-1`
    TStarInv,
}

fn congruence(m: &DMatrix<f64>, u: &DMatrix<f64>, transpose_first: bool) -> DMatrix<f64> {
    if transpose_first {
        m.transpose() * u * m
    } else {
        m * u * m.transpose()
    }
}

impl Scaling {
    fn identity(cones: &ConeDims) -> Self {
        Scaling {
            cones: cones.clone(),
            offsets: cones.block_offsets(),
            w: vec![1.0; cones.nonneg],
            lp_lambda: vec![1.0; cones.nonneg],
            blocks: cones
                .psd
                .iter()
                .map(|&n| BlockScaling {
                    n,
                    r: DMatrix::identity(n, n),
                    rinv: DMatrix::identity(n, n),
                    lambda: vec![1.0; n],
                })
                .collect(),
        }
    }

    fn apply(&self, op: Op, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for i in 0..self.cones.nonneg {
            out[i] = match op {
                Op::T | Op::TStar => v[i] * self.w[i],
                Op::TInv | Op::TStarInv => v[i] / self.w[i],
            };
        }
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let len = svec_len(b.n);
            let u = smat(&v.as_slice()[off..off + len], b.n);
            let m = match op {
                Op::T => congruence(&b.r, &u, false),
                Op::TInv => congruence(&b.rinv, &u, false),
                Op::TStar => congruence(&b.r, &u, true),
                Op::TStarInv => congruence(&b.rinv, &u, true),
            };
            svec_into(&m, &mut out.as_mut_slice()[off..off + len]);
        }
        out
    }

    /// `T^-1` applied to every column of `g`.
    fn scale_columns(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(g.nrows(), g.ncols());
        for j in 0..g.ncols() {
            for i in 0..self.cones.nonneg {
                out[(i, j)] = g[(i, j)] / self.w[i];
            }
        }
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let len = svec_len(b.n);
            for j in 0..g.ncols() {
                let col: Vec<f64> = (off..off + len).map(|i| g[(i, j)]).collect();
                if col.iter().all(|&x| x == 0.0) {
                    continue;
                }
                let u = smat(&col, b.n);
                let m = congruence(&b.rinv, &u, false);
                let mut tmp = vec![0.0; len];
                svec_into(&m, &mut tmp);
                for (k, x) in tmp.into_iter().enumerate() {
                    out[(off + k, j)] = x;
                }
            }
        }
        out
    }

    fn lambda(&self) -> DVector<f64> {
        let mut out = DVector::zeros(self.cones.len());
        for i in 0..self.cones.nonneg {
            out[i] = self.lp_lambda[i];
        }
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let mut k = off;
            for j in 0..b.n {
                out[k] = b.lambda[j];
                k += b.n - j;
            }
        }
        out
    }

    /// `lambda o lambda` summed over the cone, i.e. `s^T z`.
    fn lambda_sq_sum(&self) -> f64 {
        self.lp_lambda.iter().map(|l| l * l).sum::<f64>()
            + self.blocks.iter().flat_map(|b| b.lambda.iter()).map(|l| l * l).sum::<f64>()
    }

    /// Solves `lambda o u = v` for `u`.
    fn lambda_solve(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for i in 0..self.cones.nonneg {
            out[i] /= self.lp_lambda[i];
        }
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let mut k = off;
            for j in 0..b.n {
                for i in j..b.n {
                    out[k] *= 2.0 / (b.lambda[i] + b.lambda[j]);
                    k += 1;
                }
            }
        }
        out
    }

    /// Largest step `a` keeping `lambda + a d` in the cone (infinite if
    /// unconstrained).
    fn max_step(&self, d: &DVector<f64>) -> Result<f64> {
        let mut alpha = f64::INFINITY;
        for i in 0..self.cones.nonneg {
            if d[i] < 0.0 {
                alpha = alpha.min(self.lp_lambda[i] / -d[i]);
            }
        }
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let mut m = smat(&d.as_slice()[off..off + svec_len(b.n)], b.n);
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(i, j)] /= (b.lambda[i] * b.lambda[j]).sqrt();
                }
            }
            let ev = eigvalsh(&m)?;
            let min = ev[ev.len() - 1];
            if min < 0.0 {
                alpha = alpha.min(-1.0 / min);
            }
        }
        Ok(alpha)
    }

    /// Moves to the new scaled iterates `s~ = st`, `z~ = zt` and recomputes
    /// the NT scaling point.
    fn update(&mut self, st: &DVector<f64>, zt: &DVector<f64>) -> Result<()> {
        for i in 0..self.cones.nonneg {
            if !(st[i] > 0.0 && zt[i] > 0.0) {
                return Err(numerical());
            }
            self.w[i] *= (st[i] / zt[i]).sqrt();
            self.lp_lambda[i] = (st[i] * zt[i]).sqrt();
        }
        for (b, &off) in self.blocks.iter_mut().zip(&self.offsets) {
            let len = svec_len(b.n);
            let sm = smat(&st.as_slice()[off..off + len], b.n);
            let zm = smat(&zt.as_slice()[off..off + len], b.n);
            let ls = Cholesky::new(sm).ok_or_else(numerical)?.l();
            let lz = Cholesky::new(zm).ok_or_else(numerical)?.l();
            let svd = (lz.transpose() * &ls).svd(true, true);
            let v = svd.v_t.ok_or_else(numerical)?.transpose();
            let l = svd.singular_values;
            if l.iter().any(|&x| !(x > 0.0)) {
                return Err(numerical());
            }
            let ls_inv = ls.clone().try_inverse().ok_or_else(numerical)?;
            let mut rv = &b.r * &ls * &v;
            let mut vt_lsinv = v.transpose() * ls_inv * &b.rinv;
            for k in 0..b.n {
                let sq = l[k].sqrt();
                rv.column_mut(k).unscale_mut(sq);
                vt_lsinv.row_mut(k).scale_mut(sq);
            }
            b.r = rv;
            b.rinv = vt_lsinv;
            b.lambda = l.iter().copied().collect();
        }
        Ok(())
    }
}

fn numerical() -> Error {
    Error::Solver { status: SolveStatus::NumericalFailure, pres: f64::NAN, dres: f64::NAN, gap: f64::NAN }
}

/// Symmetric Jordan product of two cone vectors.
fn jordan(cones: &ConeDims, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(u.len());
    for i in 0..cones.nonneg {
        out[i] = u[i] * v[i];
    }
    for (&n, off) in cones.psd.iter().zip(cones.block_offsets()) {
        let len = svec_len(n);
        let a = smat(&u.as_slice()[off..off + len], n);
        let b = smat(&v.as_slice()[off..off + len], n);
        let m = (&a * &b + &b * &a) * 0.5;
        svec_into(&m, &mut out.as_mut_slice()[off..off + len]);
    }
    out
}

/// Factored reduced KKT system `[0 G^T; G -T T^*]`.
struct Kkt<'a> {
    g: &'a DMatrix<f64>,
    gs: DMatrix<f64>,
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl<'a> Kkt<'a> {
    fn factor(g: &'a DMatrix<f64>, scaling: &Scaling) -> Option<Self> {
        let gs = scaling.scale_columns(g);
        let k = gs.tr_mul(&gs);
        let n = k.nrows();
        let scale = (0..n).map(|i| k[(i, i)]).fold(0.0f64, f64::max).max(1.0);
        let mut delta = 0.0;
        for attempt in 0..=MAX_REG_ATTEMPTS {
            let mut kk = k.clone();
            for i in 0..n {
                kk[(i, i)] += delta;
            }
            if let Some(chol) = Cholesky::new(kk) {
                return Some(Kkt { g, gs, chol });
            }
            delta = scale * 1e-14 * 100f64.powi(attempt as i32);
        }
        None
    }

    fn solve_once(&self, scaling: &Scaling, bx: &DVector<f64>, bz: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let u = scaling.apply(Op::TInv, bz);
        let rhs = bx + self.gs.tr_mul(&u);
        let dx = self.chol.solve(&rhs);
        let dz = scaling.apply(Op::TStarInv, &(&self.gs * &dx - u));
        (dx, dz)
    }

    /// Solves with one step of iterative refinement.
    fn solve(&self, scaling: &Scaling, bx: &DVector<f64>, bz: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let (mut dx, mut dz) = self.solve_once(scaling, bx, bz);
        let ww_dz = scaling.apply(Op::T, &scaling.apply(Op::TStar, &dz));
        let rx = bx - self.g.tr_mul(&dz);
        let rz = bz - (self.g * &dx - ww_dz);
        let (ex, ez) = self.solve_once(scaling, &rx, &rz);
        dx += ex;
        dz += ez;
        (dx, dz)
    }
}

struct Direction {
    dx: DVector<f64>,
    dst: DVector<f64>,
    dzt: DVector<f64>,
    dtau: f64,
    dkappa: f64,
}

/// Solves a conic program in standard form.
pub fn solve(f: &StandardConicForm, opts: &SolverOptions) -> Result<ConicSolution> {
    if f.num_vars() == 0 {
        return Err(Error::InvalidInput("problem has no variables".into()));
    }
    if f.g.nrows() != f.cones.len() || f.h.len() != f.cones.len() || f.g.ncols() != f.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "G is {:?}, h has {}, cone length {}",
            f.g.shape(),
            f.h.len(),
            f.cones.len()
        )));
    }
    let red = match presolve(f)? {
        Presolved::Reduced(r) => r,
        Presolved::InconsistentEqualities(res) => {
            return Ok(trivial(f, SolveStatus::Infeasible, res));
        }
        Presolved::UnboundedDirection => {
            return Ok(trivial(f, SolveStatus::Unbounded, f64::NAN));
        }
    };
    let cones = &f.cones;
    let (g, h, c) = (&red.g, &red.h, &red.c);
    let nvar = c.len();
    let hnorm = h.norm().max(1.0);
    let cnorm = c.norm().max(1.0);
    let degree = cones.degree() as f64;

    let finish = |status: SolveStatus, x: &DVector<f64>, s: &DVector<f64>, z: &DVector<f64>, tau: f64, stats: Stats, it: usize| {
        let xf = &red.x0 + &red.m * (x / tau);
        ConicSolution {
            status,
            x: xf,
            s: s / tau,
            z: z / tau,
            primal_objective: stats.pcost + red.offset,
            dual_objective: stats.dcost + red.offset,
            gap: stats.gap,
            primal_residual: stats.pres,
            dual_residual: stats.dres,
            iterations: it,
        }
    };

    // no cone constraints left: the reduced problem is unconstrained
    if g.nrows() == 0 || nvar == 0 {
        if c.norm() > 1e-12 {
            return Ok(trivial(f, SolveStatus::Unbounded, f64::NAN));
        }
        let x = DVector::zeros(nvar);
        let s = DVector::zeros(cones.len());
        let stats = Stats { pcost: 0.0, dcost: 0.0, gap: 0.0, pres: 0.0, dres: 0.0 };
        return Ok(finish(SolveStatus::Optimal, &x, &s, &s.clone(), 1.0, stats, 0));
    }

    // cold start from least-squares points shifted into the interior
    let mut scaling = Scaling::identity(cones);
    let kkt = Kkt::factor(g, &scaling).ok_or_else(numerical)?;
    let (mut x, zls) = kkt.solve(&scaling, &DVector::zeros(nvar), h);
    let s0 = -zls;
    let (_, z0) = kkt.solve(&scaling, &(-c), &DVector::zeros(cones.len()));
    let e = cones.identity();
    let shift = |v: DVector<f64>| -> Result<DVector<f64>> {
        let min = min_eig(cones, &v)?;
        Ok(if min <= 1e-8 * v.norm().max(1.0) { &v + &e * (1.0 - min) } else { v })
    };
    let s0 = shift(s0)?;
    let z0 = shift(z0)?;
    scaling.update(&s0, &z0)?;
    let mut tau = 1.0;
    let mut kappa = 1.0;

    let mut best: Option<(DVector<f64>, DVector<f64>, DVector<f64>, f64, Stats)> = None;
    let mut best_merit = f64::INFINITY;
    let mut best_iter = 0;
    let mut iter = 0;
    // per-iteration progress on stderr
    let trace = std::env::var_os("QCAP_TRACE").is_some();
    loop {
        let lam = scaling.lambda();
        let s = scaling.apply(Op::T, &lam);
        let z = scaling.apply(Op::TStarInv, &lam);
        let rx = g.tr_mul(&z) + c * tau;
        let rz = g * &x + &s - h * tau;
        let cx = c.dot(&x);
        let hz = h.dot(&z);
        let rt = kappa + cx + hz;
        let sz = scaling.lambda_sq_sum();
        let pcost = cx / tau;
        let dcost = -hz / tau;
        let pres = rz.norm() / tau / hnorm;
        let dres = rx.norm() / tau / cnorm;
        let gap = (sz / (tau * tau)).max((pcost - dcost).abs()) / pcost.abs().max(1.0);
        let stats = Stats { pcost, dcost, gap, pres, dres };
        if trace {
            eprintln!("{iter:3} pcost {pcost:+.9e} dcost {dcost:+.9e} gap {gap:.2e} pres {pres:.2e} dres {dres:.2e} tau {tau:.2e} kappa {kappa:.2e}");
        }

        if pres <= opts.feas_tol && dres <= opts.feas_tol && gap <= opts.gap_tol {
            return Ok(finish(SolveStatus::Optimal, &x, &s, &z, tau, stats, iter));
        }
        if hz < 0.0 {
            let pinf = g.tr_mul(&z).norm() / cnorm / -hz;
            if pinf <= opts.feas_tol {
                let st = Stats { pres: pinf, ..stats };
                return Ok(finish(SolveStatus::Infeasible, &x, &s, &z, 1.0, st, iter));
            }
        }
        if cx < 0.0 {
            let dinf = (g * &x + &s).norm() / hnorm / -cx;
            if dinf <= opts.feas_tol {
                let st = Stats { dres: dinf, ..stats };
                return Ok(finish(SolveStatus::Unbounded, &x, &s, &z, 1.0, st, iter));
            }
        }
        let merit = (pres / opts.feas_tol).max(dres / opts.feas_tol).max(gap / opts.gap_tol);
        if merit < best_merit || best.is_none() {
            best_merit = merit;
            best_iter = iter;
            best = Some((x.clone(), s.clone(), z.clone(), tau, stats));
        }
        if iter >= opts.max_iter {
            return Ok(stall(SolveStatus::MaxIter, best, opts, iter, &finish));
        }
        if iter - best_iter > STALL_ITERS {
            return Ok(stall(SolveStatus::NumericalFailure, best, opts, iter, &finish));
        }

        let step = (|| -> Result<f64> {
            let kkt = Kkt::factor(g, &scaling).ok_or_else(numerical)?;
            let (x1, z1) = kkt.solve(&scaling, &(-c), h);
            let denom = c.dot(&x1) + h.dot(&z1) - kappa / tau;
            let mu = (sz + tau * kappa) / (degree + 1.0);

            let newton = |eta: f64, rs: &DVector<f64>, rk: f64| -> Direction {
                let bst = scaling.lambda_solve(rs);
                let bx = &rx * -(1.0 - eta);
                let bz = &rz * -(1.0 - eta) - scaling.apply(Op::T, &bst);
                let bt = -(1.0 - eta) * rt;
                let (x2, z2) = kkt.solve(&scaling, &bx, &bz);
                let dtau = (bt - rk / tau - c.dot(&x2) - h.dot(&z2)) / denom;
                let dx = x2 + &x1 * dtau;
                let dz = z2 + &z1 * dtau;
                let dkappa = (rk - kappa * dtau) / tau;
                let dzt = scaling.apply(Op::TStar, &dz);
                let dst = bst - &dzt;
                Direction { dx, dst, dzt, dtau, dkappa }
            };
            let max_alpha = |d: &Direction| -> Result<f64> {
                let mut a = scaling.max_step(&d.dst)?.min(scaling.max_step(&d.dzt)?);
                if d.dtau < 0.0 {
                    a = a.min(tau / -d.dtau);
                }
                if d.dkappa < 0.0 {
                    a = a.min(kappa / -d.dkappa);
                }
                Ok(a)
            };

            let lam_sq = jordan(cones, &lam, &lam);
            let aff = newton(0.0, &(-&lam_sq), -tau * kappa);
            let alpha_aff = max_alpha(&aff)?.min(1.0);
            let sigma = (1.0 - alpha_aff).powi(CENTERING_EXPONENT);

            let corr = jordan(cones, &aff.dst, &aff.dzt);
            let rs = -&lam_sq + &e * (sigma * mu) - corr;
            let rk = -tau * kappa + sigma * mu - aff.dtau * aff.dkappa;
            let d = newton(sigma, &rs, rk);
            let alpha = (STEP_FRACTION * max_alpha(&d)?).min(1.0);
            if !alpha.is_finite() || alpha <= 0.0 {
                return Err(numerical());
            }

            let st = &lam + &d.dst * alpha;
            let zt = &lam + &d.dzt * alpha;
            scaling.update(&st, &zt)?;
            x += &d.dx * alpha;
            tau += d.dtau * alpha;
            kappa += d.dkappa * alpha;
            Ok(alpha)
        })();

        iter += 1;
        match step {
            Ok(alpha) if alpha > 1e-12 => {}
            _ => return Ok(stall(SolveStatus::NumericalFailure, best, opts, iter, &finish)),
        }
    }
}

#[derive(Clone, Copy)]
struct Stats {
    pcost: f64,
    dcost: f64,
    gap: f64,
    pres: f64,
    dres: f64,
}

type Finish<'a> = dyn Fn(SolveStatus, &DVector<f64>, &DVector<f64>, &DVector<f64>, f64, Stats, usize) -> ConicSolution + 'a;

/// Reports the best iterate seen, upgraded to `NearOptimal` when it
/// meets the loosened tolerances.
fn stall(
    status: SolveStatus,
    last: Option<(DVector<f64>, DVector<f64>, DVector<f64>, f64, Stats)>,
    opts: &SolverOptions,
    iter: usize,
    finish: &Finish<'_>,
) -> ConicSolution {
    let (x, s, z, tau, st) = last.expect("at least one iterate");
    let near = st.pres <= NEAR_FACTOR * opts.feas_tol
        && st.dres <= NEAR_FACTOR * opts.feas_tol
        && st.gap <= NEAR_FACTOR * opts.gap_tol;
    finish(if near { SolveStatus::NearOptimal } else { status }, &x, &s, &z, tau, st, iter)
}

fn trivial(f: &StandardConicForm, status: SolveStatus, res: f64) -> ConicSolution {
    ConicSolution {
        status,
        x: DVector::zeros(f.num_vars()),
        s: DVector::zeros(f.cones.len()),
        z: DVector::zeros(f.cones.len()),
        primal_objective: f64::NAN,
        dual_objective: f64::NAN,
        gap: f64::NAN,
        primal_residual: res,
        dual_residual: f64::NAN,
        iterations: 0,
    }
}

/// Smallest eigenvalue over all cone blocks.
fn min_eig(cones: &ConeDims, v: &DVector<f64>) -> Result<f64> {
    let mut m = f64::INFINITY;
    for i in 0..cones.nonneg {
        m = m.min(v[i]);
    }
    for (&n, off) in cones.psd.iter().zip(cones.block_offsets()) {
        let ev = eigvalsh(&smat(&v.as_slice()[off..off + svec_len(n)], n))?;
        m = m.min(ev[ev.len() - 1]);
    }
    Ok(m)
}
