//! Python bindings: walk specs, exact and shot-based simulation, resource
//! formulas and walk diagnostics.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use qwalk::analyze;
use qwalk::resources::{self, VolumeInputs};
use qwalk::{Distribution, Flavor, NoiseParams, WalkError};

fn py_err(e: WalkError) -> PyErr {
    match e {
        WalkError::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn flavor(name: &str) -> PyResult<Flavor> {
    name.parse().map_err(py_err)
}

#[pyclass(name = "WalkSpec", module = "qwalk_py")]
struct PyWalkSpec {
    inner: qwalk::WalkSpec,
}

#[pymethods]
impl PyWalkSpec {
    #[new]
    #[pyo3(signature = (n, steps = 1, flavor = "inverters", start = 0, coin = 0))]
    fn new(n: usize, steps: usize, flavor: &str, start: usize, coin: u8) -> PyResult<Self> {
        let inner = qwalk::WalkSpec::new(n, steps, self::flavor(flavor)?).starting_at(start).with_coin(coin);
        inner.validate().map_err(py_err)?;
        Ok(PyWalkSpec { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn steps(&self) -> usize {
        self.inner.steps
    }

    #[getter]
    fn flavor(&self) -> &'static str {
        self.inner.flavor.as_str()
    }

    #[getter]
    fn positions(&self) -> usize {
        self.inner.positions()
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.inner.layout().total_qubits()
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "WalkSpec(n={}, steps={}, flavor='{}', start={}, coin={})",
            s.n, s.steps, s.flavor, s.initial_position, s.initial_coin
        )
    }
}

/// Exact position distribution as a list of `N` probabilities.
#[pyfunction]
fn run_exact(spec: PyRef<'_, PyWalkSpec>) -> PyResult<Vec<f64>> {
    Ok(qwalk::run_exact(&spec.inner).map_err(py_err)?.0)
}

/// Pooled shot frequencies and 95% half-widths, each a list of `N` floats.
#[pyfunction]
#[pyo3(signature = (spec, shots, batches = 1, p_gate = 0.0, p_meas = 0.0, seed = 0))]
fn run_shots(
    spec: PyRef<'_, PyWalkSpec>,
    shots: u64,
    batches: u64,
    p_gate: f64,
    p_meas: f64,
    seed: u64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let noise = NoiseParams::new(p_gate, p_meas).map_err(py_err)?;
    let r = qwalk::batch_experiment(&spec.inner, batches, shots, Some(&noise), seed).map_err(py_err)?;
    Ok((r.frequencies.0, r.half_widths))
}

#[pyfunction]
fn total_variation(a: Vec<f64>, b: Vec<f64>) -> f64 {
    analyze::total_variation(&Distribution(a), &Distribution(b))
}

/// Exact variance for `t = 0..=t_max` next to the ballistic law.
#[pyfunction]
#[pyo3(signature = (n, t_max, flavor = "inverters"))]
fn variance_sweep(n: usize, t_max: usize, flavor: &str) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = analyze::variance_sweep(n, t_max, self::flavor(flavor)?).map_err(py_err)?;
    Ok((s.simulated, s.theoretical))
}

#[pyfunction]
fn variance(probs: Vec<f64>) -> f64 {
    analyze::variance(&Distribution(probs))
}

#[pyfunction]
fn gate_count_formula(n_states: u64, flavor: &str) -> PyResult<u64> {
    resources::gate_count_formula(n_states, self::flavor(flavor)?).map_err(py_err)
}

#[pyfunction]
fn qubit_count(n_states: u64, flavor: &str) -> PyResult<usize> {
    resources::qubit_count(n_states, self::flavor(flavor)?).map_err(py_err)
}

/// Gate tally of one constructed step, keyed by gate label.
#[pyfunction]
fn step_gate_counts(n: usize, flavor: &str) -> PyResult<BTreeMap<String, u64>> {
    Ok(resources::gate_count_empirical(&qwalk::build_step(n, self::flavor(flavor)?)).by_kind)
}

#[pyfunction]
#[pyo3(signature = (workspace, eps_eff, machine_qubits = 15))]
fn quantum_volume(workspace: usize, eps_eff: f64, machine_qubits: usize) -> PyResult<f64> {
    resources::quantum_volume(&VolumeInputs { workspace, machine_qubits, eps_eff }).map_err(py_err)
}

#[pymodule]
fn qwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWalkSpec>()?;
    m.add_function(wrap_pyfunction!(run_exact, m)?)?;
    m.add_function(wrap_pyfunction!(run_shots, m)?)?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(variance_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(gate_count_formula, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_count, m)?)?;
    m.add_function(wrap_pyfunction!(step_gate_counts, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_volume, m)?)?;
    Ok(())
}
