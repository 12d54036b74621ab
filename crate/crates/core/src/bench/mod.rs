//! Named bounds, channel-spec parsing, parameter sweeps, result formatting and
//! the acceptance self-test. The `qcap` binary is a thin wrapper around this.

mod format;
mod selftest;
mod spec;
mod sweep;

pub use format::{fmt_sig, plot_script, render_rows, OutputFormat, SweepRow};
pub use selftest::{channel_suite, pentagon, run_criterion, run_selftest, Criterion, CriterionOutcome, CRITERIA, DEFAULT_SEED};
pub use spec::{parse_channel, ParsedChannel};
pub use sweep::{grid, run_sweep, status_name, SweepConfig, SweepParam};

use std::str::FromStr;

use crate::bounds::{self, BoundResult, CodeClass};
use crate::error::{Error, Result};
use crate::sdp::SolverOptions;

/// Every bound the command line can compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundName {
    Fns,
    FnsPpt,
    C1ns,
    C1nsPpt,
    Re,
    RePpt,
    Fplus,
    FtildePlus,
    Beta,
    Zeta,
    M0ns,
    M0nsPpt,
    Ppv,
    EaCap,
    AdLower,
    Decay,
}

impl BoundName {
    pub const ALL: [BoundName; 16] = [
        BoundName::Fns,
        BoundName::FnsPpt,
        BoundName::C1ns,
        BoundName::C1nsPpt,
        BoundName::Re,
        BoundName::RePpt,
        BoundName::Fplus,
        BoundName::FtildePlus,
        BoundName::Beta,
        BoundName::Zeta,
        BoundName::M0ns,
        BoundName::M0nsPpt,
        BoundName::Ppv,
        BoundName::EaCap,
        BoundName::AdLower,
        BoundName::Decay,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Fns => "fns",
            BoundName::FnsPpt => "fnsppt",
            BoundName::C1ns => "c1ns",
            BoundName::C1nsPpt => "c1nsppt",
            BoundName::Re => "re",
            BoundName::RePpt => "reppt",
            BoundName::Fplus => "fplus",
            BoundName::FtildePlus => "ftildeplus",
            BoundName::Beta => "beta",
            BoundName::Zeta => "zeta",
            BoundName::M0ns => "m0ns",
            BoundName::M0nsPpt => "m0nsppt",
            BoundName::Ppv => "ppv",
            BoundName::EaCap => "eacap",
            BoundName::AdLower => "adlower",
            BoundName::Decay => "decay",
        }
    }

    /// One-line description for `list-bounds`.
    pub fn description(self) -> &'static str {
        match self {
            BoundName::Fns => "optimal success probability with m messages, NS codes (needs --m)",
            BoundName::FnsPpt => "optimal success probability with m messages, NS and PPT codes (needs --m)",
            BoundName::C1ns => "one-shot eps-error capacity, NS codes (--eps)",
            BoundName::C1nsPpt => "one-shot eps-error capacity, NS and PPT codes (--eps)",
            BoundName::Re => "hypothesis-testing converse R_E (--eps)",
            BoundName::RePpt => "hypothesis-testing converse with PPT constraint (--eps)",
            BoundName::Fplus => "multiplicative success-probability bound f+ (needs --m)",
            BoundName::FtildePlus => "success-probability bound from the zeta program (needs --m)",
            BoundName::Beta => "strong converse quantity beta; value_log is C_beta",
            BoundName::Zeta => "strong converse quantity zeta; value_log is C_zeta",
            BoundName::M0ns => "one-shot zero-error message count, NS codes",
            BoundName::M0nsPpt => "one-shot zero-error message count, NS and PPT codes",
            BoundName::Ppv => "classical finite-blocklength linear program (classical channels, --eps)",
            BoundName::EaCap => "numerical max of the input-output mutual information (qubit or qutrit input)",
            BoundName::AdLower => "Holevo-rate lower bound for amplitude damping (ad channels only)",
            BoundName::Decay => "error lower bound 1 - f+(2^r)^n (needs --rate and --uses)",
        }
    }

    /// Resolves a name, letting `--class` pick the variant for the
    /// class-free short forms `f`, `c1` and `m0`.
    pub fn resolve(name: &str, class: Option<CodeClass>) -> Result<Self> {
        let ppt = class.map(CodeClass::ppt);
        match (name.to_ascii_lowercase().as_str(), ppt) {
            ("f", Some(true)) => Ok(BoundName::FnsPpt),
            ("f", _) => Ok(BoundName::Fns),
            ("c1", Some(true)) => Ok(BoundName::C1nsPpt),
            ("c1", _) => Ok(BoundName::C1ns),
            ("m0", Some(true)) => Ok(BoundName::M0nsPpt),
            ("m0", _) => Ok(BoundName::M0ns),
            _ => name.parse(),
        }
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound `{s}` (see list-bounds)")))
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scalar parameters shared by all bounds; unused ones are ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub eps: f64,
    pub m: Option<f64>,
    pub rate: Option<f64>,
    pub uses: Option<u32>,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { eps: 0.0, m: None, rate: None, uses: None }
    }
}

impl BoundParams {
    fn m_int(&self) -> Result<usize> {
        let m = self.m.ok_or_else(|| Error::InvalidInput("this bound needs --m".into()))?;
        if m < 1.0 || m.fract() != 0.0 {
            return Err(Error::InvalidInput(format!("--m must be a positive integer, got {m}")));
        }
        Ok(m as usize)
    }
}

/// Evaluates `bound` on a parsed channel.
pub fn compute(bound: BoundName, ch: &ParsedChannel, params: &BoundParams, opts: &SolverOptions) -> Result<BoundResult> {
    let q = &ch.channel;
    let eps = params.eps;
    match bound {
        BoundName::Fns => bounds::success_prob(q, params.m_int()?, CodeClass::Ns, opts),
        BoundName::FnsPpt => bounds::success_prob(q, params.m_int()?, CodeClass::NsPpt, opts),
        BoundName::C1ns => bounds::one_shot_capacity(q, eps, CodeClass::Ns, opts),
        BoundName::C1nsPpt => bounds::one_shot_capacity(q, eps, CodeClass::NsPpt, opts),
        BoundName::Re => bounds::ht_bound(q, eps, false, opts),
        BoundName::RePpt => bounds::ht_bound(q, eps, true, opts),
        BoundName::Fplus => bounds::f_plus(q, params.m_int()? as f64, opts),
        BoundName::FtildePlus => bounds::f_tilde_plus(q, params.m_int()? as f64, opts),
        BoundName::Beta => bounds::beta(q, opts),
        BoundName::Zeta => bounds::zeta(q, opts),
        BoundName::M0ns => bounds::zero_error_m0(q, CodeClass::Ns, opts),
        BoundName::M0nsPpt => bounds::zero_error_m0(q, CodeClass::NsPpt, opts),
        BoundName::Ppv => {
            let p = ch
                .classical
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("ppv needs a classical:<path> channel".into()))?;
            bounds::ppv_lp(p, eps, opts).map(|r| relabel(r, q.label()))
        }
        BoundName::EaCap => bounds::ea_capacity_search(q),
        BoundName::AdLower => {
            let g = ch
                .damping
                .ok_or_else(|| Error::InvalidInput("adlower needs an ad:<gamma> channel".into()))?;
            let bits = bounds::ad_holevo_lower(g)?;
            Ok(BoundResult::new("adlower", q.label()).param("gamma", g).with_log(bits.exp2()))
        }
        BoundName::Decay => {
            let r = params.rate.ok_or_else(|| Error::InvalidInput("decay needs --rate".into()))?;
            let n = params.uses.ok_or_else(|| Error::InvalidInput("decay needs --uses".into()))?;
            bounds::strong_converse_decay(q, r, n, opts)
        }
    }
}

fn relabel(mut r: BoundResult, label: &str) -> BoundResult {
    r.channel_label = label.to_string();
    r
}

/// Solver options with `QCAP_FEAS_TOL` / `QCAP_GAP_TOL` applied on top of
/// `base`.
pub fn options_from_env(base: SolverOptions) -> Result<SolverOptions> {
    let mut o = base;
    for (key, slot) in [("QCAP_FEAS_TOL", &mut o.feas_tol), ("QCAP_GAP_TOL", &mut o.gap_tol)] {
        if let Ok(v) = std::env::var(key) {
            let x: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("{key}={v} is not a number")))?;
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidInput(format!("{key} must be positive")));
            }
            *slot = x;
        }
    }
    Ok(o)
}

/// Seed for the randomized suites: `QCAP_SEED` if set, else `default`.
pub fn seed_from_env(default: u64) -> Result<u64> {
    match std::env::var("QCAP_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("QCAP_SEED={v} is not an integer"))),
        Err(_) => Ok(default),
    }
}

/// Exit code for an error from [`compute`]: 2 for solver trouble, 1 for
/// everything the caller got wrong.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver { .. } | Error::DualMismatch { .. } | Error::EigenNoConvergence => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for b in BoundName::ALL {
            assert_eq!(b.as_str().parse::<BoundName>().unwrap(), b);
            assert!(!b.description().is_empty());
        }
        assert!("nope".parse::<BoundName>().is_err());
        assert_eq!(BoundName::resolve("c1", Some(CodeClass::NsPpt)).unwrap(), BoundName::C1nsPpt);
        assert_eq!(BoundName::resolve("m0", None).unwrap(), BoundName::M0ns);
        assert_eq!(BoundName::resolve("BETA", Some(CodeClass::NsPpt)).unwrap(), BoundName::Beta);
    }

    #[test]
    fn compute_dispatch() {
        let opts = SolverOptions::default();
        let ad = parse_channel("ad:0.5").unwrap();
        let r = compute(BoundName::Beta, &ad, &BoundParams::default(), &opts).unwrap();
        assert!((r.value() - (1.0 + 0.5f64.sqrt()).log2()).abs() < 1e-6);
        let id3 = parse_channel("identity:3").unwrap();
        let r = compute(BoundName::Beta, &id3, &BoundParams::default(), &opts).unwrap();
        assert!((r.value() - 3f64.log2()).abs() < 1e-6);
        assert!(compute(BoundName::Fns, &ad, &BoundParams::default(), &opts).is_err());
        assert!(compute(BoundName::Ppv, &ad, &BoundParams::default(), &opts).is_err());
        let r = compute(BoundName::AdLower, &ad, &BoundParams::default(), &opts).unwrap();
        assert!(r.value() > 0.0);
        let cq = parse_channel("cq:0.75").unwrap();
        assert!(compute(BoundName::AdLower, &cq, &BoundParams::default(), &opts).is_err());
    }

    #[test]
    fn m0_on_nalpha() {
        let ch = parse_channel("nalpha:0.7854").unwrap();
        let r = compute(BoundName::M0nsPpt, &ch, &BoundParams::default(), &SolverOptions::default()).unwrap();
        assert!((r.value() - 1.0).abs() < 1e-5);
        assert!((r.value_linear - 2.0).abs() < 1e-5);
    }
}
