//! Parameter sweeps over a one-parameter family of channels or over a bound
//! parameter.

use std::str::FromStr;

use rayon::prelude::*;

use super::format::SweepRow;
use super::{compute, parse_channel, BoundName, BoundParams};
use crate::bounds::BoundResult;
use crate::error::{Error, Result};
use crate::sdp::{SolveStatus, SolverOptions};

/// `name:start:stop:step`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepParam {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, step] = parts[..] else {
            return Err(Error::Parse(format!("--param `{s}`: expected name:start:stop:step")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("--param `{s}`: `{t}` is not a number")));
        let p = SweepParam { name: name.trim().to_string(), start: num(start)?, stop: num(stop)?, step: num(step)? };
        if p.name.is_empty() {
            return Err(Error::Parse(format!("--param `{s}`: empty name")));
        }
        if !(p.step > 0.0) || !(p.start <= p.stop) || !p.stop.is_finite() || !p.start.is_finite() {
            return Err(Error::InvalidInput(format!("--param `{s}`: need step > 0 and start <= stop")));
        }
        Ok(p)
    }
}

/// Grid points `start + i * step` up to `stop` (inclusive within a relative
/// `1e-9` of a step), rounded to 12 significant digits.
pub fn grid(p: &SweepParam) -> Vec<f64> {
    let n = ((p.stop - p.start) / p.step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let x = p.start + i as f64 * p.step;
            format!("{x:.11e}").parse().expect("formatted float parses")
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub bounds: Vec<BoundName>,
    /// Channel spec; `{name}` is replaced by the swept value, and a bare
    /// family such as `ad` becomes `ad:<value>`.
    pub channel: String,
    pub param: SweepParam,
    pub fixed: BoundParams,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
}

const BOUND_PARAMS: [&str; 5] = ["eps", "m", "rate", "uses", "n"];

impl SweepConfig {
    fn point(&self, x: f64) -> Result<(String, BoundParams)> {
        let mut params = self.fixed;
        let name = self.param.name.as_str();
        if BOUND_PARAMS.contains(&name) {
            match name {
                "eps" => params.eps = x,
                "m" => params.m = Some(x),
                "rate" => params.rate = Some(x),
                _ => {
                    if x < 1.0 || x.fract() != 0.0 {
                        return Err(Error::InvalidInput(format!("uses must be a positive integer, got {x}")));
                    }
                    params.uses = Some(x as u32)
                }
            }
            return Ok((self.channel.clone(), params));
        }
        let placeholder = format!("{{{name}}}");
        let spec = if self.channel.contains(&placeholder) {
            self.channel.replace(&placeholder, &x.to_string())
        } else if !self.channel.contains(':') {
            format!("{}:{x}", self.channel.trim())
        } else {
            return Err(Error::InvalidInput(format!(
                "channel `{}` has no `{placeholder}` placeholder for the swept parameter",
                self.channel
            )));
        };
        Ok((spec, params))
    }

    /// Checks that every grid point yields a parseable channel.
    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(Error::InvalidInput("no bound to sweep".into()));
        }
        for x in grid(&self.param) {
            let (spec, _) = self.point(x)?;
            parse_channel(&spec)?;
        }
        Ok(())
    }
}

/// Lower-case status label used in output files.
pub fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::NearOptimal => "near_optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::MaxIter => "max_iter",
        SolveStatus::NumericalFailure => "numerical_failure",
    }
}

fn to_row(x: f64, bound: BoundName, r: Result<BoundResult>) -> SweepRow {
    match r {
        Ok(r) => SweepRow {
            param: x,
            bound: bound.as_str().into(),
            value_log: r.value_log,
            value_linear: Some(r.value_linear),
            status: r.status().map(status_name).unwrap_or("n/a").into(),
            gap: r.diagnostics.as_ref().map(|d| d.gap),
            error: None,
        },
        Err(e) => SweepRow {
            param: x,
            bound: bound.as_str().into(),
            value_log: None,
            value_linear: None,
            status: "error".into(),
            gap: None,
            error: Some(e.to_string()),
        },
    }
}

/// Evaluates every bound at every grid point. Failed points become flagged
/// rows; the order is grid-major, then bound order, whatever the thread
/// count.
pub fn run_sweep(cfg: &SweepConfig, opts: &SolverOptions) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let jobs: Vec<(f64, BoundName)> = grid(&cfg.param).into_iter().flat_map(|x| cfg.bounds.iter().map(move |&b| (x, b))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(x, b)| {
                let r = cfg.point(x).and_then(|(spec, params)| compute(b, &parse_channel(&spec)?, &params, opts));
                to_row(x, b, r)
            })
            .collect()
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_parsing() {
        let p: SweepParam = "gamma:0:1:0.1".parse().unwrap();
        assert_eq!(p.name, "gamma");
        let g = grid(&p);
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert!("gamma:1:0:0.1".parse::<SweepParam>().is_err());
        assert!("gamma:0:1:0".parse::<SweepParam>().is_err());
        assert!("gamma:0:1".parse::<SweepParam>().is_err());
        assert!(":0:1:0.5".parse::<SweepParam>().is_err());
        assert_eq!(grid(&"x:0:0.75:0.05".parse().unwrap()).len(), 16);
    }

    fn cfg(channel: &str, param: &str, bounds: &[BoundName]) -> SweepConfig {
        SweepConfig {
            bounds: bounds.to_vec(),
            channel: channel.into(),
            param: param.parse().unwrap(),
            fixed: BoundParams::default(),
            jobs: 2,
        }
    }

    #[test]
    fn substitution() {
        assert!(cfg("ad", "gamma:0:1:0.5", &[BoundName::Beta]).validate().is_ok());
        assert!(cfg("ad:{g} x cq:0.75", "g:0:1:0.5", &[BoundName::Beta]).validate().is_ok());
        assert!(cfg("ad:0.3", "gamma:0:1:0.5", &[BoundName::Beta]).validate().is_err());
        assert!(cfg("ad:0.3", "eps:0:0.1:0.05", &[BoundName::C1ns]).validate().is_ok());
        assert!(cfg("ad", "gamma:0:2:0.5", &[BoundName::Beta]).validate().is_err());
    }

    #[test]
    fn deterministic_order_and_flags() {
        let c = cfg("ad", "gamma:0:1:0.25", &[BoundName::Beta, BoundName::AdLower, BoundName::Fns]);
        let rows = run_sweep(&c, &SolverOptions::default()).unwrap();
        assert_eq!(rows.len(), 15);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.param, 0.25 * (i / 3) as f64);
            assert_eq!(r.bound, ["beta", "adlower", "fns"][i % 3]);
        }
        assert!(rows.iter().filter(|r| r.bound == "fns").all(|r| r.flagged()));
        assert!(rows.iter().filter(|r| r.bound != "fns").all(|r| !r.flagged()));
        let mut c1 = c.clone();
        c1.jobs = 1;
        c1.bounds = vec![BoundName::Beta];
        let a = run_sweep(&c1, &SolverOptions::default()).unwrap();
        let b: Vec<SweepRow> = rows.into_iter().filter(|r| r.bound == "beta").collect();
        assert_eq!(a, b);
    }
}
