//! Converse bounds and reference quantities for classical communication
//! over a quantum channel.
//!
//! Every SDP-based bound builds an [`SdpProblem`](crate::sdp::model::SdpProblem)
//! and returns a [`BoundResult`]. Channels with a real Choi matrix use real
//! symmetric variables, which halves the embedded block sizes.

mod coding;
mod converse;
mod entropic;

pub use coding::{cq_one_shot, ht_bound, one_shot_capacity, ppv_lp, success_prob, success_prob_dual, zero_error_m0};
pub use converse::{beta, f_plus, f_plus_dual, f_tilde_plus, f_tilde_plus_dual, strong_converse_decay, zeta};
pub use entropic::{ad_holevo_lower, ea_capacity_search, ea_mutual_info, lovasz_witness_value};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator};
use crate::sdp::model::{SdpProblem, SolverSolution};
use crate::sdp::{SolveStatus, SolverOptions};

/// Imaginary parts of the Choi matrix below this select real variables.
const REAL_CHOI_TOL: f64 = 1e-14;

/// Code class assisting the communication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeClass {
    /// No-signalling codes.
    #[serde(rename = "ns")]
    Ns,
    /// No-signalling and PPT-preserving codes.
    #[serde(rename = "nsppt")]
    NsPpt,
}

impl CodeClass {
    pub fn ppt(self) -> bool {
        self == CodeClass::NsPpt
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CodeClass::Ns => "ns",
            CodeClass::NsPpt => "nsppt",
        }
    }
}

impl std::str::FromStr for CodeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ns" => Ok(CodeClass::Ns),
            "nsppt" | "ns_ppt" | "ns-ppt" => Ok(CodeClass::NsPpt),
            other => Err(Error::Parse(format!("unknown code class `{other}`"))),
        }
    }
}

/// Solver summary attached to a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub status: SolveStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl From<&SolverSolution> for Diagnostics {
    fn from(s: &SolverSolution) -> Self {
        Diagnostics {
            status: s.status,
            primal_objective: s.primal_objective,
            dual_objective: s.dual_objective,
            gap: s.gap,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            iterations: s.iterations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub name: String,
    pub channel_label: String,
    pub params: BTreeMap<String, f64>,
    pub value_linear: f64,
    /// `log2(value_linear)` in bits, when meaningful.
    pub value_log: Option<f64>,
    #[serde(skip)]
    pub witness: BTreeMap<String, HermitianOperator>,
    pub diagnostics: Option<Diagnostics>,
}

impl BoundResult {
    pub(crate) fn new(name: &str, label: &str) -> Self {
        BoundResult {
            name: name.to_string(),
            channel_label: label.to_string(),
            params: BTreeMap::new(),
            value_linear: f64::NAN,
            value_log: None,
            witness: BTreeMap::new(),
            diagnostics: None,
        }
    }

    pub(crate) fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    /// Sets the linear value without a logarithmic one.
    pub(crate) fn linear(mut self, v: f64) -> Self {
        self.value_linear = v;
        self.value_log = None;
        self
    }

    /// Sets the linear value and its base-2 logarithm.
    pub(crate) fn with_log(mut self, v: f64) -> Self {
        self.value_linear = v;
        self.value_log = Some(v.log2());
        self
    }

    pub(crate) fn solved(mut self, sol: &SolverSolution, witness: &[&str]) -> Result<Self> {
        for name in witness {
            self.witness.insert(name.to_string(), sol.operator(name)?);
        }
        self.diagnostics = Some(Diagnostics::from(sol));
        Ok(self)
    }

    pub fn status(&self) -> Option<SolveStatus> {
        self.diagnostics.as_ref().map(|d| d.status)
    }

    /// Value in bits, falling back to the linear value.
    pub fn value(&self) -> f64 {
        self.value_log.unwrap_or(self.value_linear)
    }
}

/// Choi matrix with its dimensions and whether it is real.
pub(crate) struct ChoiData {
    pub j: ComplexMatrix,
    pub a: usize,
    pub b: usize,
    pub real: bool,
}

impl ChoiData {
    pub fn of(ch: &QuantumChannel) -> Self {
        let j = ch.choi().matrix().clone();
        let real = j.iter().all(|z| z.im.abs() <= REAL_CHOI_TOL);
        ChoiData { j, a: ch.d_in(), b: ch.d_out(), real }
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.a, self.b]
    }

    /// `J^{T_B}`.
    pub fn jtb(&self) -> ComplexMatrix {
        crate::linalg::partial_transpose(&self.j, &self.dims(), &[1]).expect("Choi dims are consistent")
    }
}

pub(crate) fn eye(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub(crate) fn scaled_eye(n: usize, x: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal_element(n, n, c(x))
}

/// Solves and turns non-optimal statuses into errors.
pub(crate) fn solve_ok(p: &SdpProblem, opts: &SolverOptions) -> Result<SolverSolution> {
    let sol = p.solve(opts)?;
    sol.ensure_ok()?;
    Ok(sol)
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("error threshold {eps} outside [0, 1)")));
    }
    Ok(())
}

/// Primal and dual values must agree to this absolute tolerance (scaled by
/// `max(1, |value|)`).
pub const DUALITY_TOL: f64 = 1e-6;

pub(crate) fn check_duality(primal: f64, dual: f64) -> Result<()> {
    if (primal - dual).abs() > DUALITY_TOL * primal.abs().max(1.0) {
        return Err(Error::DualMismatch { primal, dual });
    }
    Ok(())
}
