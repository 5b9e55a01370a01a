//! Python bindings: scenario configuration, runs, mesh statistics and the
//! oracle checks.

use std::path::{Path, PathBuf};

use porofrac::oracle::{consolidation_check, patch, patch_test, verify_suite, AffineField};
use porofrac::scenario::{self, load_scenario_file, run_scenario, ScenarioConfig};
use porofrac::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pyporofrac, NonConvergenceError, PyException, "Newton or linear solver failure.");

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => NonConvergenceError::new_err(e.to_string()),
        3 => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Scenario configuration document.
#[pyclass(name = "Config", module = "pyporofrac", skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyConfig {
    #[staticmethod]
    #[pyo3(signature = (name, level = 0))]
    fn preset(name: &str, level: usize) -> PyResult<Self> {
        Ok(PyConfig {
            inner: scenario::preset(name, level).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(PyConfig {
            inner: ScenarioConfig::from_toml(text).map_err(to_py)?,
        })
    }

    fn to_toml(&self) -> PyResult<String> {
        self.inner.to_toml().map_err(to_py)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// Contact parameter, in Pa/m.
    #[getter]
    fn get_c(&self) -> f64 {
        self.inner.solver.c
    }
    #[setter]
    fn set_c(&mut self, c: f64) {
        self.inner.solver.c = c;
    }

    #[getter]
    fn get_tolerance(&self) -> f64 {
        self.inner.solver.tolerance
    }
    #[setter]
    fn set_tolerance(&mut self, t: f64) {
        self.inner.solver.tolerance = t;
    }

    #[getter]
    fn get_dt(&self) -> f64 {
        self.inner.time.dt
    }
    #[setter]
    fn set_dt(&mut self, dt: f64) {
        self.inner.time.dt = dt;
    }

    #[getter]
    fn get_steps(&self) -> usize {
        self.inner.time.steps
    }
    #[setter]
    fn set_steps(&mut self, n: usize) {
        self.inner.time.steps = n;
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Config(name={:?})", self.inner.name)
    }
}

/// Validated scenario with its mesh.
#[pyclass(name = "Scenario", module = "pyporofrac")]
struct PyScenario {
    inner: scenario::Scenario,
}

#[pymethods]
impl PyScenario {
    /// Relative mesh paths in `config` are resolved against `base_dir`.
    #[new]
    #[pyo3(signature = (config, base_dir = None))]
    fn new(config: &PyConfig, base_dir: Option<PathBuf>) -> PyResult<Self> {
        let base = base_dir.unwrap_or_else(|| PathBuf::from("."));
        Ok(PyScenario {
            inner: scenario::Scenario::from_config(config.inner.clone(), &base).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyScenario {
            inner: load_scenario_file(&path).map_err(to_py)?,
        })
    }

    #[getter]
    fn config(&self) -> PyConfig {
        PyConfig {
            inner: self.inner.config.clone(),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn num_cells(&self) -> usize {
        self.inner.mesh.num_cells()
    }

    #[getter]
    fn fractures(&self) -> Vec<String> {
        self.inner.mesh.fractures.iter().map(|f| f.name.clone()).collect()
    }

    fn mesh_info(&self) -> String {
        self.inner.mesh.summary()
    }

    /// Run all time steps, writing results to `out` when given.
    #[pyo3(signature = (out = None))]
    fn run(&self, py: Python<'_>, out: Option<PathBuf>) -> PyResult<PyRunReport> {
        let s = &self.inner;
        let report = py.detach(|| run_scenario(s, out.as_deref())).map_err(to_py)?;
        Ok(PyRunReport {
            inner: report,
            dim: s.dim(),
        })
    }
}

/// Result of a scenario run.
#[pyclass(name = "RunReport", module = "pyporofrac")]
struct PyRunReport {
    inner: scenario::RunReport,
    dim: usize,
}

#[pymethods]
impl PyRunReport {
    #[getter]
    fn scenario(&self) -> String {
        self.inner.scenario.clone()
    }

    /// Newton iterations per step.
    #[getter]
    fn iterations(&self) -> Vec<usize> {
        self.inner.iterations()
    }

    /// Largest contact-condition violation per step, in Pa.
    #[getter]
    fn kkt(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.newton.kkt).collect()
    }

    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.time).collect()
    }

    /// Per step, a dict from fracture name to its largest slip, in m.
    #[getter]
    fn max_slip<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .steps
            .iter()
            .map(|s| {
                let d = PyDict::new(py);
                for f in &s.fractures {
                    d.set_item(&f.name, f.max_slip)?;
                }
                Ok(d)
            })
            .collect()
    }

    /// Cell displacements of the final state as `dim`-tuples.
    #[getter]
    fn displacement(&self) -> Vec<Vec<f64>> {
        let Some(state) = &self.inner.final_state else {
            return Vec::new();
        };
        state.u.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    #[getter]
    fn pressure(&self) -> Vec<f64> {
        self.inner.final_state.as_ref().map(|s| s.p.clone()).unwrap_or_default()
    }

    /// Fracture faces of the final state: centroid, tractions, jumps, label.
    #[getter]
    fn faces<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .final_faces
            .iter()
            .map(|f| {
                let d = PyDict::new(py);
                d.set_item("fracture", f.fracture)?;
                d.set_item("centroid", (f.centroid.x, f.centroid.y, f.centroid.z))?;
                d.set_item("area", f.area)?;
                d.set_item("lambda_n", f.lambda_n())?;
                d.set_item("lambda_t", f.lambda_t())?;
                d.set_item("jump_n", f.jump_n())?;
                d.set_item("jump_t", f.jump_t())?;
                d.set_item("friction", f.friction)?;
                d.set_item("set", format!("{:?}", f.set).to_lowercase())?;
                Ok(d)
            })
            .collect()
    }

    fn text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("RunReport(scenario={:?}, steps={})", self.inner.scenario, self.inner.steps.len())
    }
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    scenario::PRESETS.to_vec()
}

/// Largest relative deviation of a random affine field on the built-in
/// unstructured square (2d) or jittered cube (3d).
#[pyfunction]
#[pyo3(signature = (dim, seed = 0))]
fn patch_error(py: Python<'_>, dim: usize, seed: u64) -> PyResult<f64> {
    let mesh = match dim {
        2 => patch::unstructured_square(),
        3 => patch::jittered_cube(seed),
        _ => return Err(PyValueError::new_err(format!("dim must be 2 or 3, got {dim}"))),
    }
    .map_err(to_py)?;
    py.detach(|| patch_test(&mesh, &patch::unit_material(), &AffineField::random(dim, seed)))
        .map(|r| r.max())
        .map_err(to_py)
}

/// Consolidation column against the series solution.
#[pyfunction]
#[pyo3(signature = (cells_deep = 50, dt_fraction = 1e-3, time_fraction = 0.1))]
fn consolidation<'py>(
    py: Python<'py>,
    cells_deep: usize,
    dt_fraction: f64,
    time_fraction: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py
        .detach(|| consolidation_check(cells_deep, dt_fraction, time_fraction))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("cells", r.cells)?;
    d.set_item("initial_pressure", r.initial_pressure)?;
    d.set_item("first_step_max", r.first_step_max)?;
    d.set_item("overshoot", r.overshoot)?;
    d.set_item("time_fraction", r.time_fraction)?;
    d.set_item("l2_error", r.l2_error)?;
    Ok(d)
}

/// Full oracle suite; returns `(passed, report text)`.
#[pyfunction]
#[pyo3(signature = (states = 20))]
fn verify(py: Python<'_>, states: usize) -> PyResult<(bool, String)> {
    let r = py.detach(|| verify_suite(states)).map_err(to_py)?;
    Ok((r.passed(), r.to_text()))
}

/// Mesh statistics of a configuration file.
#[pyfunction]
fn mesh_info(path: PathBuf) -> PyResult<String> {
    let s = load_scenario_file(Path::new(&path)).map_err(to_py)?;
    Ok(s.mesh.summary())
}

#[pymodule]
fn pyporofrac(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyRunReport>()?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(patch_error, m)?)?;
    m.add_function(wrap_pyfunction!(consolidation, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(mesh_info, m)?)?;
    Ok(())
}
