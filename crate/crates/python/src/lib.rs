// SPDX-License-Identifier: MIT OR Apache-2.0

//! Python bindings: segments, samples, tests, estimators and experiments.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use segdetect::experiments::{self, ExperimentConfig, SeparationConfig};
use segdetect::{DesignKind, DesignSpec, NoiseFamily, NoiseSpec, SimRng};

fn to_py(e: segdetect::Error) -> PyErr {
    if e.is_config_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn design_kind(kind: &str) -> PyResult<DesignKind> {
    kind.parse().map_err(|e: segdetect::Error| to_py(e))
}

fn noise_spec(family: &str, sigma: f64) -> PyResult<NoiseSpec> {
    let family: NoiseFamily = serde_json::from_value(serde_json::Value::String(family.to_string()))
        .map_err(|_| PyValueError::new_err(format!("unknown noise family `{family}`")))?;
    NoiseSpec::new(family, sigma).map_err(to_py)
}

/// Closed interval `[a, b]` inside `[0, 1]`, or the empty set.
#[pyclass(name = "Segment", module = "pysegdetect", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct PySegment(segdetect::Segment);

#[pymethods]
impl PySegment {
    #[new]
    fn new(a: f64, b: f64) -> PyResult<Self> {
        segdetect::Segment::new(a, b).map(PySegment).map_err(to_py)
    }

    #[staticmethod]
    fn empty() -> Self {
        PySegment(segdetect::Segment::EMPTY)
    }

    #[getter]
    fn a(&self) -> Option<f64> {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> Option<f64> {
        self.0.b()
    }

    #[getter]
    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[getter]
    fn measure(&self) -> f64 {
        self.0.measure()
    }

    #[getter]
    fn midpoint(&self) -> Option<f64> {
        self.0.midpoint()
    }

    fn contains(&self, x: f64) -> bool {
        self.0.contains(x)
    }

    fn sym_diff(&self, other: PyRef<'_, PySegment>) -> f64 {
        segdetect::sym_diff_measure(&self.0, &other.0)
    }

    fn __repr__(&self) -> String {
        match self.0.bounds() {
            Some((a, b)) => format!("Segment({a}, {b})"),
            None => "Segment.empty()".into(),
        }
    }
}

/// Sorted design points with their responses.
#[pyclass(name = "Sample", module = "pysegdetect", frozen, skip_from_py_object)]
pub struct PySample(segdetect::Sample);

#[pymethods]
impl PySample {
    #[new]
    fn new(x: Vec<f64>, y: Vec<f64>) -> PyResult<Self> {
        segdetect::Sample::new(x, y).map(PySample).map_err(to_py)
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.0.x().to_vec()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.0.y().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn lse_criterion(&self, g: PyRef<'_, PySegment>) -> f64 {
        self.0.lse_criterion(&g.0)
    }
}

#[pyclass(name = "TestResult", module = "pysegdetect", frozen, get_all, skip_from_py_object)]
pub struct PyTestResult {
    reject: bool,
    statistic: Option<f64>,
    threshold: f64,
    n_used: usize,
}

impl From<segdetect::TestResult> for PyTestResult {
    fn from(t: segdetect::TestResult) -> Self {
        PyTestResult { reject: t.reject, statistic: t.statistic, threshold: t.threshold, n_used: t.n_used }
    }
}

#[pymethods]
impl PyTestResult {
    fn __repr__(&self) -> String {
        format!("TestResult(reject={}, statistic={:?}, n_used={})", self.reject, self.statistic, self.n_used)
    }
}

#[pyclass(name = "Estimate", module = "pysegdetect", frozen, skip_from_py_object)]
pub struct PyEstimate(segdetect::EstimateResult);

#[pymethods]
impl PyEstimate {
    #[getter]
    fn segment(&self) -> PySegment {
        PySegment(self.0.segment)
    }

    #[getter]
    fn criterion(&self) -> f64 {
        self.0.criterion
    }

    /// First and last 1-based positions inside the segment.
    #[getter]
    fn index_window(&self) -> Option<(usize, usize)> {
        self.0.index_window
    }

    #[getter]
    fn pilot(&self) -> Option<PySegment> {
        self.0.stage_info.as_ref().map(|s| PySegment(s.pilot))
    }

    #[getter]
    fn midpoint(&self) -> Option<f64> {
        self.0.stage_info.as_ref().and_then(|s| s.midpoint)
    }

    #[getter]
    fn fallback(&self) -> Option<String> {
        let f = self.0.stage_info.as_ref()?.fallback?;
        serde_json::to_value(f).ok()?.as_str().map(String::from)
    }

    fn __repr__(&self) -> String {
        format!("Estimate({}, criterion={})", self.0.segment, self.0.criterion)
    }
}

/// Design points for `kind` in {"dd", "rd"}; `seed` only matters for "rd".
#[pyfunction]
#[pyo3(signature = (kind, n, seed=0))]
fn generate_design(kind: &str, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    let spec = DesignSpec::new(design_kind(kind)?, n).map_err(to_py)?;
    Ok(segdetect::generate_design(&spec, &mut SimRng::new(seed, 0)))
}

/// Responses `1(x ∈ truth) + noise` at the given design.
#[pyfunction]
#[pyo3(signature = (design, truth, family="gaussian", sigma=1.0, seed=0))]
fn simulate(design: Vec<f64>, truth: PyRef<'_, PySegment>, family: &str, sigma: f64, seed: u64) -> PyResult<PySample> {
    let noise = noise_spec(family, sigma)?;
    segdetect::simulate(&design, &truth.0, &noise, &mut SimRng::new(seed, 1))
        .map(PySample)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sample, h, c=0.5))]
fn test_anchored(sample: PyRef<'_, PySample>, h: f64, c: f64) -> PyResult<PyTestResult> {
    segdetect::test_anchored(&sample.0, h, c).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn test_scan(sample: PyRef<'_, PySample>, h: f64) -> PyResult<PyTestResult> {
    segdetect::test_scan(&sample.0, h).map(Into::into).map_err(to_py)
}

/// `(value, k, l)` of the best feasible window, or `None`.
#[pyfunction]
fn scan_statistic(sample: PyRef<'_, PySample>, h: f64) -> PyResult<Option<(f64, usize, usize)>> {
    let outcome = segdetect::scan_statistic(&sample.0, h).map_err(to_py)?;
    Ok(outcome.value().zip(outcome.window()).map(|(v, (k, l))| (v, k, l)))
}

#[pyfunction]
fn lse_segment(sample: PyRef<'_, PySample>) -> PyEstimate {
    PyEstimate(segdetect::lse_segment(&sample.0))
}

#[pyfunction]
fn lse_changepoint(sample: PyRef<'_, PySample>) -> PyEstimate {
    PyEstimate(segdetect::lse_changepoint(&sample.0))
}

#[pyfunction]
fn estimate_with_min_length(sample: PyRef<'_, PySample>, mu: f64) -> PyResult<PyEstimate> {
    segdetect::estimate_with_min_length(&sample.0, mu).map(PyEstimate).map_err(to_py)
}

#[pyfunction]
fn sym_diff_measure(g1: PyRef<'_, PySegment>, g2: PyRef<'_, PySegment>) -> f64 {
    segdetect::sym_diff_measure(&g1.0, &g2.0)
}

#[pyfunction]
fn hellinger_affinity(
    g1: PyRef<'_, PySegment>,
    g2: PyRef<'_, PySegment>,
    kind: &str,
    n: usize,
    sigma: f64,
) -> PyResult<f64> {
    let spec = DesignSpec::new(design_kind(kind)?, n).map_err(to_py)?;
    segdetect::theory::hellinger_affinity(&g1.0, &g2.0, &spec, sigma).map_err(to_py)
}

/// Runs a risk experiment described by a JSON config; returns the report as JSON.
#[pyfunction]
fn monte_carlo_risk(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg: ExperimentConfig = serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py.detach(|| experiments::monte_carlo_risk(&cfg)).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Runs a separation experiment described by a JSON config; returns the report as JSON.
#[pyfunction]
fn separation_curve(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg: SeparationConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py.detach(|| experiments::separation_curve(&cfg)).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn pysegdetect(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySegment>()?;
    m.add_class::<PySample>()?;
    m.add_class::<PyTestResult>()?;
    m.add_class::<PyEstimate>()?;
    m.add_function(wrap_pyfunction!(generate_design, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(test_anchored, m)?)?;
    m.add_function(wrap_pyfunction!(test_scan, m)?)?;
    m.add_function(wrap_pyfunction!(scan_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(lse_segment, m)?)?;
    m.add_function(wrap_pyfunction!(lse_changepoint, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_with_min_length, m)?)?;
    m.add_function(wrap_pyfunction!(sym_diff_measure, m)?)?;
    m.add_function(wrap_pyfunction!(hellinger_affinity, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_risk, m)?)?;
    m.add_function(wrap_pyfunction!(separation_curve, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
