//! Entropic reference quantities and the Lovasz witness value.

use super::BoundResult;
use crate::channel::{sperp_residual, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{binary_entropy, c, kron, ComplexMatrix, HermitianOperator};

/// `||1 + T||_inf` for a witness `T` in the orthogonal complement of the
/// channel's non-commutative graph with `1 + T >= 0`; a lower bound on the
/// Lovasz number of the channel.
pub fn lovasz_witness_value(ch: &QuantumChannel, t: &HermitianOperator) -> Result<f64> {
    if t.side() != ch.d_in() {
        return Err(Error::DimensionMismatch(format!("witness side {} vs input dimension {}", t.side(), ch.d_in())));
    }
    let res = sperp_residual(ch.ncgraph(), t)?;
    if res > 1e-8 {
        return Err(Error::InvalidInput(format!("witness is not orthogonal to the graph (residual {res:.3e})")));
    }
    let shifted = HermitianOperator::new(vec![t.side()], t.matrix() + ComplexMatrix::identity(t.side(), t.side()))?;
    let lo = shifted.min_eigenvalue()?;
    if lo < -1e-8 {
        return Err(Error::NotPsd(lo));
    }
    shifted.operator_norm()
}

fn check_state(rho: &HermitianOperator, d: usize) -> Result<()> {
    if rho.side() != d {
        return Err(Error::DimensionMismatch(format!("state side {} vs input dimension {d}", rho.side())));
    }
    if (rho.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("state has trace {}", rho.trace())));
    }
    let lo = rho.min_eigenvalue()?;
    if lo < -1e-9 {
        return Err(Error::NotPsd(lo));
    }
    Ok(())
}

/// `H(rho) + H(N(rho)) - H((id (x) N) phi_rho)` in bits, where `phi_rho` is
/// the purification `sum_i |i> (x) sqrt(rho) |i>`.
pub fn ea_mutual_info(ch: &QuantumChannel, rho: &HermitianOperator) -> Result<f64> {
    let d = ch.d_in();
    check_state(rho, d)?;
    let sqrt = rho.spectral_decompose()?.map(|x| x.max(0.0).sqrt());
    let mut phi = ComplexMatrix::zeros(d * d, 1);
    for i in 0..d {
        for j in 0..d {
            phi[(i * d + j, 0)] = sqrt[(j, i)];
        }
    }
    let pure = &phi * phi.adjoint();
    let id = ComplexMatrix::identity(d, d);
    let mut joint = ComplexMatrix::zeros(d * ch.d_out(), d * ch.d_out());
    for k in ch.kraus() {
        let ek = kron(&id, k);
        joint += &ek * &pure * ek.adjoint();
    }
    let joint = HermitianOperator::new(vec![d, ch.d_out()], joint)?;
    let out = ch.apply(rho)?;
    Ok(rho.entropy()? + out.entropy()? - joint.entropy()?)
}

fn bloch_state(r: [f64; 3]) -> HermitianOperator {
    let [x, y, z] = r;
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(0.5 * (1.0 + z)), num_complex::Complex64::new(0.5 * x, -0.5 * y), num_complex::Complex64::new(0.5 * x, 0.5 * y), c(0.5 * (1.0 - z))],
    );
    HermitianOperator::new(vec![2], m).expect("Bloch matrix is Hermitian")
}

fn diagonal_state(p: &[f64]) -> HermitianOperator {
    HermitianOperator::diagonal(p)
}

/// Pattern search: tries `+-step` along each coordinate, moves on strict
/// improvement, halves the step otherwise.
fn refine<F, P>(mut x: Vec<f64>, mut best: f64, mut step: f64, steps: usize, project: P, f: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Option<f64>,
    P: Fn(&mut Vec<f64>),
{
    for _ in 0..steps {
        let mut improved = false;
        for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[k] += sign * step;
                project(&mut y);
                if let Some(v) = f(&y) {
                    if v > best {
                        best = v;
                        x = y;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, best)
}

/// Grid points per axis of the coarse search.
const GRID: usize = 20;
/// Pattern-search iterations after the grid.
const REFINE_STEPS: usize = 50;

/// Numerical estimate of `max_rho I(rho; N)` (a lower estimate of the
/// entanglement-assisted capacity). Qubit inputs search the Bloch ball;
/// qutrit inputs search diagonal states. `value_log` holds the estimate in
/// bits.
pub fn ea_capacity_search(ch: &QuantumChannel) -> Result<BoundResult> {
    let d = ch.d_in();
    let (point, best) = match d {
        1 => (vec![], 0.0),
        2 => {
            let eval = |r: &[f64]| -> Option<f64> {
                let n2 = r.iter().map(|v| v * v).sum::<f64>();
                if n2 > 1.0 + 1e-12 {
                    return None;
                }
                ea_mutual_info(ch, &bloch_state([r[0], r[1], r[2]])).ok()
            };
            let axis: Vec<f64> = (0..GRID).map(|i| -1.0 + 2.0 * i as f64 / (GRID - 1) as f64).collect();
            let mut best = (vec![0.0; 3], f64::NEG_INFINITY);
            for &x in &axis {
                for &y in &axis {
                    for &z in &axis {
                        let r = vec![x, y, z];
                        if let Some(v) = eval(&r) {
                            if v > best.1 {
                                best = (r, v);
                            }
                        }
                    }
                }
            }
            let project = |r: &mut Vec<f64>| {
                let n = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n > 1.0 {
                    r.iter_mut().for_each(|v| *v /= n);
                }
            };
            refine(best.0, best.1, 2.0 / (GRID - 1) as f64, REFINE_STEPS, project, eval)
        }
        3 => {
            let eval = |p: &[f64]| -> Option<f64> {
                let q = [p[0], p[1], 1.0 - p[0] - p[1]];
                if q.iter().any(|&v| v < -1e-12) {
                    return None;
                }
                let q = q.map(|v| v.max(0.0));
                ea_mutual_info(ch, &diagonal_state(&q)).ok()
            };
            let mut best = (vec![0.0, 0.0], f64::NEG_INFINITY);
            for i in 0..=GRID {
                for j in 0..=GRID - i {
                    let p = vec![i as f64 / GRID as f64, j as f64 / GRID as f64];
                    if let Some(v) = eval(&p) {
                        if v > best.1 {
                            best = (p, v);
                        }
                    }
                }
            }
            let project = |p: &mut Vec<f64>| {
                p.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
                let s = p[0] + p[1];
                if s > 1.0 {
                    p[0] /= s;
                    p[1] /= s;
                }
            };
            refine(best.0, best.1, 1.0 / GRID as f64, REFINE_STEPS, project, eval)
        }
        _ => return Err(Error::TooLarge(format!("input dimension {d} > 3"))),
    };
    let mut r = BoundResult::new("eacap", ch.label()).with_log(best.exp2());
    for (i, v) in point.iter().enumerate() {
        r = r.param(&format!("x{i}"), *v);
    }
    Ok(r)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Holevo-rate lower bound on the classical capacity of amplitude damping:
/// `max_p H2((1 - g) p) - H2((1 + sqrt(1 - 4 (1 - g) g p^2)) / 2)`.
pub fn ad_holevo_lower(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidInput(format!("damping parameter {gamma} outside [0, 1]")));
    }
    let f = |p: f64| -> f64 {
        let disc = (1.0 - 4.0 * (1.0 - gamma) * gamma * p * p).max(0.0);
        let a = binary_entropy(((1.0 - gamma) * p).clamp(0.0, 1.0)).unwrap_or(0.0);
        let b = binary_entropy(((1.0 + disc.sqrt()) / 2.0).clamp(0.0, 1.0)).unwrap_or(0.0);
        a - b
    };
    // bracket on a coarse grid first
    let n = 200;
    let mut k: usize = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let v = f(i as f64 / n as f64);
        if v > best {
            best = v;
            k = i;
        }
    }
    let lo = (k.saturating_sub(1)) as f64 / n as f64;
    let hi = ((k + 1).min(n)) as f64 / n as f64;
    let (_, v) = golden_max(f, lo, hi, 1e-10);
    Ok(v.max(best).max(0.0))
}
