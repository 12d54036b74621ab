//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qcap_core::bench::{self, run_criterion, run_selftest, DEFAULT_SEED};
use qcap_core::bounds::{self, CodeClass};
use qcap_core::channel::{self as chan, QuantumChannel};
use qcap_core::linalg::{ComplexMatrix, HermitianOperator};
use qcap_core::sdp::SolverOptions;
use qcap_core::{oracles, Error};

fn py_err(e: Error) -> PyErr {
    match bench::exit_code(&e) {
        2 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Rows = Vec<Vec<Complex64>>;

fn to_matrix(rows: &Rows) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn to_rows(a: &ComplexMatrix) -> Rows {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect()).collect()
}

fn class(s: &str) -> PyResult<CodeClass> {
    s.parse().map_err(py_err)
}

fn opts(feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<SolverOptions> {
    let mut o = SolverOptions::default();
    if let Some(v) = feas_tol {
        o.feas_tol = v;
    }
    if let Some(v) = gap_tol {
        o.gap_tol = v;
    }
    bench::options_from_env(o).map_err(py_err)
}

/// A quantum channel given by Kraus operators.
#[pyclass(name = "Channel", frozen, module = "qcap")]
struct PyChannel(QuantumChannel);

#[pymethods]
impl PyChannel {
    #[new]
    #[pyo3(signature = (kraus, label = "custom"))]
    fn new(kraus: Vec<Rows>, label: &str) -> PyResult<Self> {
        let ks = kraus.iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        let (d_out, d_in) = ks.first().map(|k| (k.nrows(), k.ncols())).ok_or_else(|| PyValueError::new_err("no Kraus operators"))?;
        QuantumChannel::new(label, d_in, d_out, ks).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn amplitude_damping(gamma: f64) -> PyResult<Self> {
        chan::amplitude_damping(gamma).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn cq_two_state(a: f64) -> PyResult<Self> {
        chan::cq_two_state(a).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn n_alpha(alpha: f64) -> PyResult<Self> {
        chan::n_alpha(alpha).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn identity(d: usize) -> PyResult<Self> {
        chan::identity(d).map(Self).map_err(py_err)
    }

    /// Classical channel from a row-stochastic matrix `p[x][y]`.
    #[staticmethod]
    fn classical(p: Vec<Vec<f64>>) -> PyResult<Self> {
        chan::classical_channel(&p).map(Self).map_err(py_err)
    }

    /// Parses a command-line channel spec such as `"ad:0.3 x cq:0.9"`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        bench::parse_channel(spec).map(|p| Self(p.channel)).map_err(py_err)
    }

    #[getter]
    fn label(&self) -> &str {
        self.0.label()
    }

    #[getter]
    fn d_in(&self) -> usize {
        self.0.d_in()
    }

    #[getter]
    fn d_out(&self) -> usize {
        self.0.d_out()
    }

    fn kraus(&self) -> Vec<Rows> {
        self.0.kraus().iter().map(to_rows).collect()
    }

    fn choi(&self) -> Rows {
        to_rows(self.0.choi().matrix())
    }

    fn apply(&self, rho: Rows) -> PyResult<Rows> {
        let rho = HermitianOperator::from_matrix(to_matrix(&rho)?).map_err(py_err)?;
        self.0.apply(&rho).map(|r| to_rows(r.matrix())).map_err(py_err)
    }

    fn tensor(&self, other: &PyChannel) -> PyResult<Self> {
        self.0.tensor(&other.0).map(Self).map_err(py_err)
    }

    fn complementary(&self) -> PyResult<Self> {
        self.0.complementary().map(Self).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Channel('{}', d_in={}, d_out={})", self.0.label(), self.0.d_in(), self.0.d_out())
    }
}

/// Value of a bound with its solver summary.
#[pyclass(name = "BoundResult", frozen, module = "qcap")]
struct PyBoundResult(bounds::BoundResult);

#[pymethods]
impl PyBoundResult {
    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn channel_label(&self) -> &str {
        &self.0.channel_label
    }

    #[getter]
    fn value_linear(&self) -> f64 {
        self.0.value_linear
    }

    #[getter]
    fn value_log(&self) -> Option<f64> {
        self.0.value_log
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, f64> {
        self.0.params.clone()
    }

    #[getter]
    fn status(&self) -> Option<&'static str> {
        self.0.status().map(bench::status_name)
    }

    #[getter]
    fn gap(&self) -> Option<f64> {
        self.0.diagnostics.as_ref().map(|d| d.gap)
    }

    #[getter]
    fn iterations(&self) -> Option<usize> {
        self.0.diagnostics.as_ref().map(|d| d.iterations)
    }

    fn witness(&self) -> BTreeMap<String, Rows> {
        self.0.witness.iter().map(|(k, v)| (k.clone(), to_rows(v.matrix()))).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| py_err(e.into()))
    }

    fn __repr__(&self) -> String {
        let log = self.0.value_log.map(|v| format!(", value_log={v}")).unwrap_or_default();
        format!("BoundResult('{}', '{}', value_linear={}{log})", self.0.name, self.0.channel_label, self.0.value_linear)
    }
}

fn wrap(r: qcap_core::Result<bounds::BoundResult>) -> PyResult<PyBoundResult> {
    r.map(PyBoundResult).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (ch, m, cls = "nsppt", feas_tol = None, gap_tol = None))]
fn success_prob(ch: &PyChannel, m: usize, cls: &str, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::success_prob(&ch.0, m, class(cls)?, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, m, cls = "nsppt", feas_tol = None, gap_tol = None))]
fn success_prob_dual(ch: &PyChannel, m: usize, cls: &str, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::success_prob_dual(&ch.0, m, class(cls)?, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, eps, cls = "nsppt", feas_tol = None, gap_tol = None))]
fn one_shot_capacity(ch: &PyChannel, eps: f64, cls: &str, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::one_shot_capacity(&ch.0, eps, class(cls)?, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, eps, ppt = false, feas_tol = None, gap_tol = None))]
fn ht_bound(ch: &PyChannel, eps: f64, ppt: bool, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::ht_bound(&ch.0, eps, ppt, &opts(feas_tol, gap_tol)?))
}

/// One-shot capacity of `x -> outputs[x]`.
#[pyfunction]
#[pyo3(signature = (outputs, eps, feas_tol = None, gap_tol = None))]
fn cq_one_shot(outputs: Vec<Rows>, eps: f64, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    let states = outputs
        .iter()
        .map(|r| HermitianOperator::from_matrix(to_matrix(r)?).map_err(py_err))
        .collect::<PyResult<Vec<_>>>()?;
    wrap(bounds::cq_one_shot(&states, eps, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (p, eps, feas_tol = None, gap_tol = None))]
fn ppv_lp(p: Vec<Vec<f64>>, eps: f64, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::ppv_lp(&p, eps, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, m, feas_tol = None, gap_tol = None))]
fn f_plus(ch: &PyChannel, m: f64, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::f_plus(&ch.0, m, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, m, feas_tol = None, gap_tol = None))]
fn f_tilde_plus(ch: &PyChannel, m: f64, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::f_tilde_plus(&ch.0, m, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, feas_tol = None, gap_tol = None))]
fn beta(ch: &PyChannel, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::beta(&ch.0, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, feas_tol = None, gap_tol = None))]
fn zeta(ch: &PyChannel, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::zeta(&ch.0, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
#[pyo3(signature = (ch, cls = "nsppt", feas_tol = None, gap_tol = None))]
fn zero_error_m0(ch: &PyChannel, cls: &str, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::zero_error_m0(&ch.0, class(cls)?, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
fn lovasz_witness_value(ch: &PyChannel, t: Rows) -> PyResult<f64> {
    let t = HermitianOperator::from_matrix(to_matrix(&t)?).map_err(py_err)?;
    bounds::lovasz_witness_value(&ch.0, &t).map_err(py_err)
}

#[pyfunction]
fn ea_mutual_info(ch: &PyChannel, rho: Rows) -> PyResult<f64> {
    let rho = HermitianOperator::from_matrix(to_matrix(&rho)?).map_err(py_err)?;
    bounds::ea_mutual_info(&ch.0, &rho).map_err(py_err)
}

#[pyfunction]
fn ea_capacity_search(ch: &PyChannel) -> PyResult<PyBoundResult> {
    wrap(bounds::ea_capacity_search(&ch.0))
}

#[pyfunction]
fn ad_holevo_lower(gamma: f64) -> PyResult<f64> {
    bounds::ad_holevo_lower(gamma).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (ch, rate, n, feas_tol = None, gap_tol = None))]
fn strong_converse_decay(ch: &PyChannel, rate: f64, n: u32, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(bounds::strong_converse_decay(&ch.0, rate, n, &opts(feas_tol, gap_tol)?))
}

/// Success probability optimized over the full bipartite code.
#[pyfunction]
#[pyo3(signature = (ch, m, ppt = true, feas_tol = None, gap_tol = None))]
fn full_code_success_prob(ch: &PyChannel, m: usize, ppt: bool, feas_tol: Option<f64>, gap_tol: Option<f64>) -> PyResult<PyBoundResult> {
    wrap(oracles::full_code_success_prob(&ch.0, m, ppt, &opts(feas_tol, gap_tol)?))
}

#[pyfunction]
fn brute_force_classical_success(p: Vec<Vec<f64>>, m: usize) -> PyResult<f64> {
    oracles::brute_force_classical_success(&p, m).map_err(py_err)
}

#[pyfunction]
fn zero_error_independent_set(p: Vec<Vec<f64>>) -> PyResult<usize> {
    oracles::zero_error_independent_set(&p).map_err(py_err)
}

/// Runs the acceptance criteria; returns `(id, passed, line)` tuples.
#[pyfunction]
#[pyo3(signature = (criteria = None, seed = None))]
fn selftest(py: Python<'_>, criteria: Option<Vec<String>>, seed: Option<u64>) -> PyResult<Vec<(String, bool, String)>> {
    let o = opts(None, None)?;
    let seed = match seed {
        Some(s) => s,
        None => bench::seed_from_env(DEFAULT_SEED).map_err(py_err)?,
    };
    let outcomes = py.detach(|| match criteria {
        None => Ok(run_selftest(&o, seed)),
        Some(ids) => ids
            .iter()
            .map(|id| run_criterion(id, &o, seed).ok_or_else(|| format!("unknown criterion `{id}`")))
            .collect::<Result<Vec<_>, _>>(),
    });
    let outcomes = outcomes.map_err(PyValueError::new_err)?;
    Ok(outcomes.into_iter().map(|o| (o.id.to_string(), o.passed, o.line())).collect())
}

#[pymodule]
fn qcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyBoundResult>()?;
    m.add_function(wrap_pyfunction!(success_prob, m)?)?;
    m.add_function(wrap_pyfunction!(success_prob_dual, m)?)?;
    m.add_function(wrap_pyfunction!(one_shot_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(ht_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cq_one_shot, m)?)?;
    m.add_function(wrap_pyfunction!(ppv_lp, m)?)?;
    m.add_function(wrap_pyfunction!(f_plus, m)?)?;
    m.add_function(wrap_pyfunction!(f_tilde_plus, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(zero_error_m0, m)?)?;
    m.add_function(wrap_pyfunction!(lovasz_witness_value, m)?)?;
    m.add_function(wrap_pyfunction!(ea_mutual_info, m)?)?;
    m.add_function(wrap_pyfunction!(ea_capacity_search, m)?)?;
    m.add_function(wrap_pyfunction!(ad_holevo_lower, m)?)?;
    m.add_function(wrap_pyfunction!(strong_converse_decay, m)?)?;
    m.add_function(wrap_pyfunction!(full_code_success_prob, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_classical_success, m)?)?;
    m.add_function(wrap_pyfunction!(zero_error_independent_set, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
