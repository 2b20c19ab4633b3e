use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quasiconv::config::RunConfig;
use quasiconv::error::Error;
use quasiconv::membership::{self, CatalogId, HerglotzAtoms, SamplingGrid};
use quasiconv::operators::{self, OperatorParams};
use quasiconv::series::{self, C64};
use quasiconv::verify::{self, Suite};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Normalized function `z + a_2 z^2 + ... + a_N z^N`.
#[pyclass(name = "FunctionCoefficients", module = "pyquasiconv", from_py_object)]
#[derive(Clone)]
struct PyFunction {
    inner: series::FunctionCoefficients,
}

#[pymethods]
impl PyFunction {
    /// Builds `f` from `a_2 .. a_N`.
    #[new]
    fn new(tail: Vec<Complex64>) -> PyResult<Self> {
        series::FunctionCoefficients::new(tail).map(|inner| Self { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn identity(order: usize) -> Self {
        Self { inner: series::FunctionCoefficients::identity(order) }
    }

    /// Catalog function by name: `identity`, `half_plane`, `log_map` or `rotated:<angle>`.
    #[staticmethod]
    fn catalog(name: &str, order: usize) -> PyResult<Self> {
        let id: CatalogId = name.parse().map_err(py_err)?;
        Ok(Self { inner: membership::convex_catalog(id, order) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        series::FunctionCoefficients::from_json(text).map(|inner| Self { inner }).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    /// `a_1 .. a_N`, with `a_1 = 1`.
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    fn __repr__(&self) -> String {
        format!("FunctionCoefficients(order={})", self.inner.order())
    }
}

/// Coefficients `c_1 .. c_N` of `sum c_k z^(alpha + k - 1)`.
#[pyclass(name = "AlphaSeries", module = "pyquasiconv", from_py_object)]
#[derive(Clone)]
struct PyAlphaSeries {
    inner: series::AlphaSeries,
}

#[pymethods]
impl PyAlphaSeries {
    #[new]
    fn new(alpha: f64, coeffs: Vec<Complex64>) -> PyResult<Self> {
        series::AlphaSeries::new(alpha, coeffs).map(|inner| Self { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        series::AlphaSeries::from_json(text).map(|inner| Self { inner }).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn is_normalized(&self) -> bool {
        self.inner.is_normalized()
    }

    /// Principal-branch value at `z`.
    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        series::evaluate_alpha(&self.inner, z).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("AlphaSeries(alpha={}, order={})", self.inner.alpha(), self.inner.order())
    }
}

/// Class `T_n^alpha(beta)`.
#[pyclass(name = "ClassSpec", module = "pyquasiconv", from_py_object)]
#[derive(Clone)]
struct PyClassSpec {
    inner: membership::ClassSpec,
}

#[pymethods]
impl PyClassSpec {
    #[new]
    fn new(n: u32, alpha: f64, beta: f64) -> PyResult<Self> {
        membership::ClassSpec::new(n, alpha, beta).map(|inner| Self { inner }).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    fn __repr__(&self) -> String {
        format!("ClassSpec(n={}, alpha={}, beta={})", self.inner.n(), self.inner.alpha(), self.inner.beta())
    }
}

/// Outcome of one sampled lower-bound test.
#[pyclass(name = "MembershipReport", module = "pyquasiconv", get_all, skip_from_py_object)]
struct PyReport {
    min_re: f64,
    argmin_r: f64,
    argmin_theta: f64,
    threshold: f64,
    margin: f64,
    guard: f64,
    tolerance: f64,
    trusted: bool,
    #[pyo3(name = "passed")]
    pass: bool,
    json: String,
}

impl From<membership::MembershipReport> for PyReport {
    fn from(r: membership::MembershipReport) -> Self {
        Self {
            json: r.to_json(),
            min_re: r.min_re,
            argmin_r: r.argmin_r,
            argmin_theta: r.argmin_theta,
            threshold: r.threshold,
            margin: r.margin,
            guard: r.guard,
            tolerance: r.tolerance,
            trusted: r.trusted,
            pass: r.pass,
        }
    }
}

#[pymethods]
impl PyReport {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __bool__(&self) -> bool {
        self.pass && self.trusted
    }

    fn __repr__(&self) -> String {
        format!(
            "MembershipReport(min_re={}, threshold={}, passed={}, trusted={})",
            self.min_re, self.threshold, self.pass, self.trusted
        )
    }
}

/// Outcome of one verification suite.
#[pyclass(name = "SuiteResult", module = "pyquasiconv", skip_from_py_object)]
struct PySuiteResult {
    inner: verify::SuiteResult,
}

#[pymethods]
impl PySuiteResult {
    #[getter]
    fn suite(&self) -> String {
        self.inner.suite.clone()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    #[getter]
    fn cases(&self) -> usize {
        self.inner.cases.len()
    }

    #[getter]
    fn exceptions(&self) -> usize {
        self.inner.exceptions.len()
    }

    /// Labels of the failing cases.
    fn failures(&self) -> Vec<String> {
        self.inner.failures().map(|c| c.label.clone()).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "SuiteResult(suite={:?}, passed={}, cases={})",
            self.inner.suite,
            self.inner.pass,
            self.inner.cases.len()
        )
    }
}

fn grid(radii: Option<Vec<f64>>, angles: usize) -> PyResult<SamplingGrid> {
    let config = RunConfig::default();
    SamplingGrid::new(radii.unwrap_or(config.radii), angles).map_err(py_err)
}

fn operator_params(kind: &str, c: f64, sigma: f64, gamma: f64) -> PyResult<OperatorParams> {
    OperatorParams::from_kind(kind, c, sigma, gamma).map_err(py_err)
}

#[pyfunction]
fn alpha_power(f: &PyFunction, alpha: f64, order: usize) -> PyResult<PyAlphaSeries> {
    series::alpha_power(&f.inner, alpha, order).map(|inner| PyAlphaSeries { inner }).map_err(py_err)
}

#[pyfunction]
fn alpha_root(s: &PyAlphaSeries) -> PyResult<PyFunction> {
    series::alpha_root(&s.inner).map(|inner| PyFunction { inner }).map_err(py_err)
}

#[pyfunction]
fn quasi_convolution(f: &PyAlphaSeries, g: &PyAlphaSeries) -> PyResult<PyAlphaSeries> {
    series::quasi_convolution(&f.inner, &g.inner).map(|inner| PyAlphaSeries { inner }).map_err(py_err)
}

#[pyfunction]
fn integral_quasi_convolution(s: &PyAlphaSeries) -> PyAlphaSeries {
    PyAlphaSeries { inner: series::integral_quasi_convolution(&s.inner) }
}

#[pyfunction]
fn salagean(s: &PyAlphaSeries, n: i32) -> PyResult<PyAlphaSeries> {
    series::salagean(&s.inner, n).map(|inner| PyAlphaSeries { inner }).map_err(py_err)
}

#[pyfunction]
fn inverse_salagean(s: &PyAlphaSeries, n: i32) -> PyResult<PyAlphaSeries> {
    series::inverse_salagean(&s.inner, n).map(|inner| PyAlphaSeries { inner }).map_err(py_err)
}

/// Quasi-convolution of `f^alpha` and `g^alpha` at `r e^{i theta}` by contour integration.
#[pyfunction]
#[pyo3(signature = (f, g, alpha, r, theta, panels = 4096))]
fn circle_convolution_oracle(
    f: &PyFunction,
    g: &PyFunction,
    alpha: f64,
    r: f64,
    theta: f64,
    panels: usize,
) -> PyResult<Complex64> {
    series::circle_convolution_oracle(&f.inner, &g.inner, alpha, r.sqrt(), theta, panels).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (f, spec, radii = None, angles = 256, tol = 1e-6))]
fn check_membership(
    f: &PyFunction,
    spec: &PyClassSpec,
    radii: Option<Vec<f64>>,
    angles: usize,
    tol: f64,
) -> PyResult<PyReport> {
    let grid = grid(radii, angles)?;
    membership::check_membership(&f.inner, &spec.inner, &grid, tol).map(PyReport::from).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (g, radii = None, angles = 256, tol = 1e-6))]
fn check_convex(g: &PyFunction, radii: Option<Vec<f64>>, angles: usize, tol: f64) -> PyResult<PyReport> {
    let grid = grid(radii, angles)?;
    membership::check_convex(&g.inner, &grid, tol).map(PyReport::from).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (g, order, radii = None, angles = 256, tol = 1e-6))]
fn check_starlike_order(
    g: &PyFunction,
    order: f64,
    radii: Option<Vec<f64>>,
    angles: usize,
    tol: f64,
) -> PyResult<PyReport> {
    let grid = grid(radii, angles)?;
    membership::check_starlike_order(&g.inner, order, &grid, tol).map(PyReport::from).map_err(py_err)
}

/// Member of `spec` built from atoms `(weight, angle)` of a measure on the circle.
#[pyfunction]
fn generate_member(spec: &PyClassSpec, atoms: Vec<(f64, f64)>, order: usize) -> PyResult<PyFunction> {
    let atoms = HerglotzAtoms::new(atoms.into_iter().map(|(w, a)| (w, C64::from_polar(1.0, a))).collect())
        .map_err(py_err)?;
    membership::generate_member(&spec.inner, &atoms, order).map(|inner| PyFunction { inner }).map_err(py_err)
}

/// Member of `spec` from `count` seeded random atoms.
#[pyfunction]
fn random_member(spec: &PyClassSpec, count: usize, seed: u64, order: usize) -> PyResult<PyFunction> {
    let atoms = HerglotzAtoms::random(count, seed).map_err(py_err)?;
    membership::generate_member(&spec.inner, &atoms, order).map(|inner| PyFunction { inner }).map_err(py_err)
}

/// Multipliers `mu_1 .. mu_N` of `phi1`, `phi2` or `phi3`.
#[pyfunction]
#[pyo3(signature = (kind, alpha, order, c = 0.0, sigma = 1.0, gamma = 1.0))]
fn multipliers(kind: &str, alpha: f64, order: usize, c: f64, sigma: f64, gamma: f64) -> PyResult<Vec<f64>> {
    let params = operator_params(kind, c, sigma, gamma)?;
    operators::multiplier_sequence(&params, alpha, order).map(|m| m.values().to_vec()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (s, kind, c = 0.0, sigma = 1.0, gamma = 1.0))]
fn apply_operator(s: &PyAlphaSeries, kind: &str, c: f64, sigma: f64, gamma: f64) -> PyResult<PyAlphaSeries> {
    let params = operator_params(kind, c, sigma, gamma)?;
    operators::apply_operator(&s.inner, &params).map(|inner| PyAlphaSeries { inner }).map_err(py_err)
}

/// Runs a named verification suite; `overrides` are `key = value` config lines.
#[pyfunction]
#[pyo3(signature = (name, overrides = None, workers = 0))]
fn run_suite(py: Python<'_>, name: &str, overrides: Option<&str>, workers: usize) -> PyResult<PySuiteResult> {
    let suite: Suite = name.parse().map_err(py_err)?;
    let config = match overrides {
        Some(text) => RunConfig::parse(text).map_err(py_err)?,
        None => RunConfig::default(),
    };
    let inner = py.detach(|| verify::run_suite(suite, &config, workers)).map_err(py_err)?;
    Ok(PySuiteResult { inner })
}

#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

#[pymodule]
fn pyquasiconv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunction>()?;
    m.add_class::<PyAlphaSeries>()?;
    m.add_class::<PyClassSpec>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PySuiteResult>()?;
    m.add_function(wrap_pyfunction!(alpha_power, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_root, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_convolution, m)?)?;
    m.add_function(wrap_pyfunction!(integral_quasi_convolution, m)?)?;
    m.add_function(wrap_pyfunction!(salagean, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_salagean, m)?)?;
    m.add_function(wrap_pyfunction!(circle_convolution_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(check_membership, m)?)?;
    m.add_function(wrap_pyfunction!(check_convex, m)?)?;
    m.add_function(wrap_pyfunction!(check_starlike_order, m)?)?;
    m.add_function(wrap_pyfunction!(generate_member, m)?)?;
    m.add_function(wrap_pyfunction!(random_member, m)?)?;
    m.add_function(wrap_pyfunction!(multipliers, m)?)?;
    m.add_function(wrap_pyfunction!(apply_operator, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}
