//! Python bindings. Structured results come back as plain dicts with the same
//! layout as the CLI reports.

use cohiggs::bfield::{random_theta, DolbeaultB};
use cohiggs::bundle::{canonical_o_plus_t, random_bundle, random_trivial_bundle, CoHiggsBundleP1};
use cohiggs::cli;
use cohiggs::cohomology::hypercohomology;
use cohiggs::nahm::{self, NahmError, DEFAULT_DT};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(cohiggs_py, PoleEncountered, PyException, "The Nahm flow left the finite region.");

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Bundle", module = "cohiggs_py", frozen)]
struct PyBundle {
    inner: CoHiggsBundleP1,
}

impl PyBundle {
    fn checked(&self) -> PyResult<&CoHiggsBundleP1> {
        if self.inner.is_valid() {
            Ok(&self.inner)
        } else {
            Err(PyValueError::new_err("invalid bundle: some entry exceeds its degree bound"))
        }
    }
}

#[pymethods]
impl PyBundle {
    /// `phi[i][j]` lists coefficients in ascending degree as exact strings
    /// such as `"1/2"` or `"3-2i"`.
    #[new]
    fn new(degrees: Vec<i64>, phi: Vec<Vec<Vec<String>>>) -> PyResult<Self> {
        let v = serde_json::json!({ "degrees": degrees, "phi": phi });
        Ok(PyBundle { inner: serde_json::from_value(v).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyBundle { inner: serde_json::from_str(text).map_err(value_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_err)
    }

    #[staticmethod]
    fn o_plus_t() -> Self {
        PyBundle { inner: canonical_o_plus_t() }
    }

    #[staticmethod]
    #[pyo3(signature = (k, seed, height = 3))]
    fn random_trivial(k: usize, seed: u64, height: u64) -> Self {
        PyBundle { inner: random_trivial_bundle(k, seed, height) }
    }

    #[staticmethod]
    #[pyo3(signature = (degrees, seed, height = 3))]
    fn random(degrees: Vec<i64>, seed: u64, height: u64) -> Self {
        PyBundle { inner: random_bundle(&degrees, seed, height) }
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn degrees(&self) -> Vec<i64> {
        self.inner.degrees().to_vec()
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    fn hypercohomology(&self) -> PyResult<(usize, usize, usize)> {
        Ok(hypercohomology(self.checked()?).map_err(value_err)?.dims())
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::validate_report(&self.inner))
    }

    fn spectral<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::spectral_report(self.checked()?))
    }

    fn cohomology<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::cohomology_report(self.checked()?))
    }

    fn stability<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cli::stability_report(self.checked()?))
    }

    /// `theta` is theta JSON; a seeded random one-variable theta otherwise.
    #[pyo3(signature = (theta = None, seed = 1, height = 3))]
    fn bfield_check<'py>(
        &self,
        py: Python<'py>,
        theta: Option<&str>,
        seed: u64,
        height: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let theta: DolbeaultB = match theta {
            Some(t) => serde_json::from_str(t).map_err(value_err)?,
            None => random_theta(1, seed, height),
        };
        to_py(py, &cli::bfield_report(self.checked()?, theta).map_err(value_err)?)
    }

    fn __repr__(&self) -> String {
        format!("Bundle(degrees={:?})", self.inner.degrees())
    }
}

#[pyclass(name = "NahmState", module = "cohiggs_py", frozen)]
struct PyNahmState {
    inner: nahm::NahmState,
}

fn nahm_err(e: NahmError) -> PyErr {
    match e {
        NahmError::PoleEncountered { t } => PoleEncountered::new_err(t),
        other => value_err(other),
    }
}

#[pymethods]
impl PyNahmState {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyNahmState { inner: serde_json::from_str(text).map_err(value_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(value_err)
    }

    #[staticmethod]
    fn random(k: usize, seed: u64) -> Self {
        PyNahmState { inner: nahm::random_state(k, seed) }
    }

    /// `T_a = e_a / (c - t)` for the spin `(k-1)/2` triple.
    #[staticmethod]
    #[pyo3(signature = (k, c, t = 0.0))]
    fn pole(k: usize, c: f64, t: f64) -> Self {
        PyNahmState { inner: nahm::pole_solution(k, c, t) }
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    /// `[T1, T2, T3]` as nested lists of complex numbers.
    fn matrices(&self) -> Vec<Vec<Vec<num_complex::Complex64>>> {
        [&self.inner.t1, &self.inner.t2, &self.inner.t3]
            .iter()
            .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
            .collect()
    }

    #[pyo3(signature = (duration, dt = DEFAULT_DT))]
    fn integrate(&self, py: Python<'_>, duration: f64, dt: f64) -> PyResult<Self> {
        let s = py.detach(|| nahm::integrate(&self.inner, duration, dt)).map_err(nahm_err)?;
        Ok(PyNahmState { inner: s })
    }

    #[pyo3(signature = (duration, dt = DEFAULT_DT))]
    fn lax_flow(&self, py: Python<'_>, duration: f64, dt: f64) -> PyResult<Self> {
        let s = py.detach(|| nahm::lax_flow(&self.inner, duration, dt)).map_err(nahm_err)?;
        Ok(PyNahmState { inner: s })
    }

    #[pyo3(signature = (duration, dt = DEFAULT_DT, samples = 5))]
    fn isospectral_drift(&self, py: Python<'_>, duration: f64, dt: f64, samples: usize) -> PyResult<f64> {
        py.detach(|| nahm::isospectral_drift(&self.inner, duration, dt, samples)).map_err(nahm_err)
    }

    #[pyo3(signature = (other, samples = 5))]
    fn spectral_distance(&self, other: &PyNahmState, samples: usize) -> f64 {
        nahm::spectral_distance(&self.inner, &other.inner, samples)
    }

    fn distance(&self, other: &PyNahmState) -> f64 {
        self.inner.distance(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("NahmState(k={}, t={})", self.inner.rank(), self.inner.t)
    }
}

/// Sign and residual of the Lax-pair consistency check on random data.
#[pyfunction]
fn lax_consistency(k: usize, seed: u64) -> PyResult<(i32, f64)> {
    let c = nahm::lax_consistency_oracle(k, seed).map_err(nahm_err)?;
    Ok((c.sign, c.residual))
}

/// File name to JSON text for the canonical fixtures.
#[pyfunction]
#[pyo3(signature = (seed = 1, height = 3))]
fn demo_fixtures(seed: u64, height: u64) -> Vec<(String, String)> {
    cli::demo_fixtures(seed, height)
}

/// Runs the command-line front end in-process and returns its exit code.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| cli::main_with_args(std::iter::once("cohiggs".to_string()).chain(args)))
}

#[pymodule]
fn cohiggs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBundle>()?;
    m.add_class::<PyNahmState>()?;
    m.add("PoleEncountered", m.py().get_type::<PoleEncountered>())?;
    m.add_function(wrap_pyfunction!(lax_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(demo_fixtures, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
