//! Python bindings for `pwinterp`.
//!
//! Kernel indices are zero-based, matching the Rust API.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pwinterp::criterion::{self, CriterionReport, SamplingVerdicts};
use pwinterp::kernels::{self as k, Kernels as KernelsTrait};
use pwinterp::verify::Suite;
use pwinterp::{Error, C64};

create_exception!(pwinterp_py, NoFormulaError, PyValueError, "No interpolation formula exists for these parameters.");
create_exception!(pwinterp_py, AccuracyError, PyRuntimeError, "Kernel quadrature is under-resolved at this argument.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoFormula(_) | Error::InvalidNodes(_) => NoFormulaError::new_err(e.to_string()),
        Error::Accuracy { .. } => AccuracyError::new_err(e.to_string()),
        Error::Synthesis { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for pwinterp::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Fourier-multiplier symbol `K(ξ)`.
#[pyclass(frozen, from_py_object, name = "Multiplier", module = "pwinterp_py")]
#[derive(Clone)]
struct PyMultiplier {
    inner: pwinterp::MultiplierSpec,
}

#[pymethods]
impl PyMultiplier {
    #[staticmethod]
    fn identity() -> Self {
        Self { inner: pwinterp::MultiplierSpec::identity() }
    }

    #[staticmethod]
    fn shift(a: f64) -> Self {
        Self { inner: pwinterp::MultiplierSpec::shift(a) }
    }

    #[staticmethod]
    #[pyo3(signature = (order, shift = 0.0))]
    fn derivative(order: u32, shift: f64) -> Self {
        Self { inner: pwinterp::MultiplierSpec::derivative(order, shift) }
    }

    #[staticmethod]
    #[pyo3(signature = (epsilon, shift = 0.0))]
    fn diffquot(epsilon: f64, shift: f64) -> PyResult<Self> {
        Ok(Self { inner: pwinterp::MultiplierSpec::diffquot(epsilon, shift).py_err()? })
    }

    /// Polynomial in `2πiξ` (ascending coefficients) times a shift.
    #[staticmethod]
    #[pyo3(signature = (coeffs, shift = 0.0))]
    fn poly(coeffs: Vec<C64>, shift: f64) -> PyResult<Self> {
        Ok(Self { inner: pwinterp::MultiplierSpec::poly(coeffs, shift).py_err()? })
    }

    fn powered(&self, k: u32) -> Self {
        Self { inner: self.inner.powered(k) }
    }

    fn __call__(&self, xi: f64) -> C64 {
        self.inner.eval(xi)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Operators `T_1, …, T_N` sampled on `ρℤ`.
#[pyclass(frozen, from_py_object, name = "OperatorFamily", module = "pwinterp_py")]
#[derive(Clone)]
struct PyFamily {
    inner: pwinterp::OperatorFamily,
}

fn family(inner: pwinterp::Result<pwinterp::OperatorFamily>) -> PyResult<PyFamily> {
    Ok(PyFamily { inner: inner.py_err()? })
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (members, rho = None, delta = None))]
    fn new(members: Vec<PyMultiplier>, rho: Option<f64>, delta: Option<f64>) -> PyResult<Self> {
        let mut f = pwinterp::OperatorFamily::new(members.into_iter().map(|m| m.inner).collect()).py_err()?;
        if let Some(r) = rho {
            f = f.with_rho(r).py_err()?;
        }
        if let Some(d) = delta {
            f = f.with_delta(d).py_err()?;
        }
        Ok(Self { inner: f })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        family(pwinterp::OperatorFamily::from_json_str(text))
    }

    #[staticmethod]
    fn shannon() -> Self {
        Self { inner: pwinterp::OperatorFamily::shannon() }
    }

    #[staticmethod]
    fn vaaler() -> Self {
        Self { inner: pwinterp::OperatorFamily::vaaler() }
    }

    #[staticmethod]
    fn littmann(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("N must be >= 1"));
        }
        Ok(Self { inner: pwinterp::OperatorFamily::littmann(n) })
    }

    #[staticmethod]
    fn shifted(nodes: Vec<f64>) -> PyResult<Self> {
        family(pwinterp::OperatorFamily::shifted(&nodes))
    }

    #[staticmethod]
    fn twonode(order: u32, a: f64, b: f64) -> Self {
        Self { inner: pwinterp::OperatorFamily::twonode(order, a, b) }
    }

    #[staticmethod]
    fn diffquot(epsilon: f64, a: f64, b: f64) -> PyResult<Self> {
        family(pwinterp::OperatorFamily::diffquot(epsilon, a, b))
    }

    #[staticmethod]
    fn power(base: &PyMultiplier, n: usize) -> PyResult<Self> {
        family(pwinterp::power_family(&base.inner, n))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    /// `M_T(x)` as nested lists, row index first.
    fn matrix(&self, x: f64) -> PyResult<Vec<Vec<C64>>> {
        let m = criterion::build_matrix(&self.inner, x).py_err()?;
        Ok((0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect())
    }

    #[pyo3(signature = (initial_grid = 4096, refine_levels = 3, tol_det = 1e-10))]
    fn det_profile(&self, initial_grid: usize, refine_levels: usize, tol_det: f64) -> PyResult<DetProfile> {
        let opts = criterion::CriterionOptions { initial_grid, refine_levels, tol_det };
        Ok(DetProfile { inner: Arc::new(criterion::det_profile_with(&self.inner, &opts).py_err()?) })
    }

    /// Classification report as a dict.
    #[pyo3(signature = (initial_grid = 4096, refine_levels = 3, tol_det = 1e-10))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        initial_grid: usize,
        refine_levels: usize,
        tol_det: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        self.det_profile(initial_grid, refine_levels, tol_det)?.report(py)
    }

    /// Stable-sampling and interpolation verdicts on `PW_{δπ}`.
    #[pyo3(signature = (delta, initial_grid = 4096, refine_levels = 3))]
    fn classify_theorem2<'py>(
        &self,
        py: Python<'py>,
        delta: f64,
        initial_grid: usize,
        refine_levels: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = criterion::CriterionOptions { initial_grid, refine_levels, ..Default::default() };
        verdicts_dict(py, &criterion::classify_theorem2_with(&self.inner, delta, &opts).py_err()?)
    }

    #[pyo3(signature = (grid_size = 4096))]
    fn common_roots(&self, grid_size: usize) -> PyResult<Vec<f64>> {
        pwinterp::common_root_scan(&self.inner, grid_size).py_err()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("OperatorFamily(N={}, rho={}, delta={})", self.inner.n(), self.inner.rho(), self.inner.delta())
    }
}

fn case_name(c: pwinterp::CriterionCase) -> &'static str {
    match c {
        pwinterp::CriterionCase::PositiveEssInf => "positive_essinf",
        pwinterp::CriterionCase::NullZeroSet => "null_zero_set",
        pwinterp::CriterionCase::PositiveMeasureZeroSet => "positive_measure_zero_set",
    }
}

fn verdict(v: pwinterp::Verdict) -> &'static str {
    match v {
        pwinterp::Verdict::Yes => "yes",
        pwinterp::Verdict::No => "no",
        pwinterp::Verdict::Unknown => "unknown",
    }
}

fn report_dict<'py>(py: Python<'py>, r: &CriterionReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("case", case_name(r.case))?;
    d.set_item("case_number", r.case.exit_code().max(1))?;
    d.set_item("essinf_estimate", r.essinf_estimate)?;
    d.set_item("zero_fraction", r.zero_fraction)?;
    d.set_item("min_location", r.min_location)?;
    d.set_item("N", r.n)?;
    d.set_item("rho", r.rho)?;
    d.set_item("grid_points", r.grid_points)?;
    d.set_item("tol_det", r.tol_det)?;
    d.set_item("measure_threshold", r.measure_threshold)?;
    Ok(d)
}

fn verdicts_dict<'py>(py: Python<'py>, v: &SamplingVerdicts) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("stable_sampling", verdict(v.stable_sampling))?;
    d.set_item("interpolation_set", verdict(v.interpolation_set))?;
    d.set_item("case", case_name(v.case))?;
    d.set_item("rho_delta", v.rho_delta)?;
    Ok(d)
}

/// Determinant of `M_T` sampled over the source interval.
#[pyclass(frozen, module = "pwinterp_py")]
struct DetProfile {
    inner: Arc<criterion::MatrixField>,
}

#[pymethods]
impl DetProfile {
    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.inner.grid.clone()
    }

    #[getter]
    fn dets(&self) -> Vec<C64> {
        self.inner.dets.clone()
    }

    #[getter]
    fn conds(&self) -> Vec<f64> {
        self.inner.conds.clone()
    }

    #[getter]
    fn zero_fraction(&self) -> f64 {
        self.inner.zero_fraction()
    }

    /// `(min |det|, location)`.
    fn min_abs_det(&self) -> (f64, f64) {
        self.inner.min_abs_det()
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &criterion::classify(&self.inner))
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        let f = std::fs::File::create(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        pwinterp::io::write_det_profile(f, &self.inner).py_err()
    }

    fn __len__(&self) -> usize {
        self.inner.grid.len()
    }
}

/// Finite combination `Σ c_k sinc(x − x_k)`.
#[pyclass(frozen, from_py_object, name = "Signal", module = "pwinterp_py")]
#[derive(Clone)]
struct PySignal {
    inner: pwinterp::BandlimitedSignal,
}

#[pymethods]
impl PySignal {
    #[new]
    fn new(terms: Vec<(C64, f64)>) -> Self {
        Self { inner: pwinterp::BandlimitedSignal::new(terms) }
    }

    #[staticmethod]
    fn sinc_at(center: f64) -> Self {
        Self { inner: pwinterp::BandlimitedSignal::sinc_at(center) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: pwinterp::BandlimitedSignal::from_json_str(text).py_err()? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn terms(&self) -> Vec<(C64, f64)> {
        self.inner.terms().to_vec()
    }

    fn __call__(&self, x: f64) -> C64 {
        self.inner.eval(x)
    }

    fn spectrum(&self, xi: f64) -> C64 {
        self.inner.spectrum(xi)
    }

    fn norm_sq(&self) -> f64 {
        pwinterp::l2_norm_sq(&self.inner)
    }

    /// `T(f)(x)` for a multiplier `T`.
    fn apply(&self, op: &PyMultiplier, x: f64) -> C64 {
        pwinterp::apply_operator(&op.inner.clone().into(), &self.inner, x)
    }
}

/// Samples `T_n(f)(ρm)` for `|m| ≤ M`.
#[pyclass(frozen, name = "SampleSet", module = "pwinterp_py")]
struct PySamples {
    inner: pwinterp::SampleSet,
}

#[pymethods]
impl PySamples {
    #[getter]
    fn n_ops(&self) -> usize {
        self.inner.n_ops()
    }

    #[getter]
    fn m_max(&self) -> usize {
        self.inner.m_max()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    fn get(&self, n: usize, m: i64) -> PyResult<C64> {
        let mm = self.inner.m_max() as i64;
        if n >= self.inner.n_ops() || m.abs() > mm {
            return Err(PyValueError::new_err(format!("index ({n}, {m}) outside the sample window")));
        }
        Ok(self.inner.get(n, m))
    }

    fn row(&self, n: usize) -> PyResult<Vec<C64>> {
        if n >= self.inner.n_ops() {
            return Err(PyValueError::new_err(format!("operator index {n} out of range")));
        }
        Ok(self.inner.row(n).to_vec())
    }
}

/// A set of reconstruction kernels, spectral or closed-form.
#[pyclass(frozen, name = "Kernels", module = "pwinterp_py")]
struct PyKernels {
    inner: Arc<dyn KernelsTrait>,
    label: String,
}

impl PyKernels {
    fn wrap<K: KernelsTrait + 'static>(k: K, label: impl Into<String>) -> Self {
        Self { inner: Arc::new(k), label: label.into() }
    }

    fn closed(k: pwinterp::Result<pwinterp::ClosedFormKernels>) -> PyResult<Self> {
        let k = k.py_err()?;
        let label = k.kind().name().to_string();
        Ok(Self::wrap(k, label))
    }
}

#[pymethods]
impl PyKernels {
    /// Invert `M_T` at `grid` Gauss–Legendre nodes per spectral piece.
    #[staticmethod]
    #[pyo3(signature = (family, grid = 64))]
    fn synthesize(py: Python<'_>, family: &PyFamily, grid: usize) -> PyResult<Self> {
        let fam = family.inner.clone();
        let k = py.detach(move || pwinterp::synthesize_spectral(&fam, grid)).py_err()?;
        Ok(Self::wrap(k, "spectral"))
    }

    #[staticmethod]
    #[pyo3(signature = (base, n, grid = 64))]
    fn dynamical(base: &PyMultiplier, n: usize, grid: usize) -> PyResult<Self> {
        Ok(Self::wrap(pwinterp::dynamical_kernels(&base.inner, n, grid).py_err()?, "dynamical"))
    }

    #[staticmethod]
    fn sinc() -> Self {
        Self::wrap(pwinterp::ClosedFormKernels::sinc(), "sinc")
    }

    #[staticmethod]
    fn littmann(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("N must be >= 1"));
        }
        Ok(Self::wrap(pwinterp::ClosedFormKernels::littmann(n), "littmann"))
    }

    #[staticmethod]
    fn shifted(nodes: Vec<f64>) -> PyResult<Self> {
        Self::closed(pwinterp::ClosedFormKernels::shifted(&nodes))
    }

    #[staticmethod]
    fn twonode(order: u32, a: f64, b: f64) -> PyResult<Self> {
        Self::closed(pwinterp::twonode_kernels(order, a, b))
    }

    #[staticmethod]
    fn diffquot(epsilon: f64, a: f64, b: f64) -> PyResult<Self> {
        Self::closed(pwinterp::diffquot_kernels(epsilon, a, b))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn kind(&self) -> &str {
        &self.label
    }

    fn eval(&self, n: usize, x: f64) -> PyResult<C64> {
        self.inner.eval(n, x).py_err()
    }

    fn eval_all(&self, x: f64) -> PyResult<Vec<C64>> {
        self.inner.eval_all(x).py_err()
    }

    fn spectrum(&self, n: usize, xi: f64) -> PyResult<C64> {
        self.inner.spectrum(n, xi).py_err()
    }

    /// Max `|T_m(g_n)(Nj) − δ_{nm}δ_{j0}|` over `|j| ≤ j_range`.
    #[pyo3(signature = (family, j_range = 3))]
    fn biorthogonality(&self, py: Python<'_>, family: &PyFamily, j_range: usize) -> PyResult<f64> {
        let k = self.inner.clone();
        let fam = family.inner.clone();
        py.detach(move || k::verify_biorthogonality(&fam, k.as_ref(), j_range)).py_err()
    }

    fn write_spectra(&self, path: &str) -> PyResult<()> {
        let f = std::fs::File::create(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        pwinterp::io::write_spectra(f, self.inner.as_ref()).py_err()
    }

    fn write_values(&self, path: &str, xs: Vec<f64>) -> PyResult<()> {
        let f = std::fs::File::create(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        pwinterp::io::write_kernel_values(f, self.inner.as_ref(), &xs).py_err()
    }

    fn __repr__(&self) -> String {
        format!("Kernels(kind={:?}, N={})", self.label, self.inner.order())
    }
}

#[pyfunction]
fn sample_family(family: &PyFamily, signal: &PySignal, m: usize) -> PySamples {
    PySamples { inner: pwinterp::sample_family(&family.inner, &signal.inner, m) }
}

/// Reconstructed values at `xs` as `(value, tail_estimate)` pairs.
#[pyfunction]
fn reconstruct(py: Python<'_>, samples: &PySamples, kernels: &PyKernels, xs: Vec<f64>) -> PyResult<Vec<(C64, f64)>> {
    let k = kernels.inner.clone();
    let recs = py.detach(|| pwinterp::reconstruct::reconstruct_many(&samples.inner, k.as_ref(), &xs)).py_err()?;
    Ok(recs.into_iter().map(|r| (r.value, r.tail)).collect())
}

/// `(sup error, L² error)` of the reconstruction over `grid`.
#[pyfunction]
fn residual_norms(
    py: Python<'_>,
    signal: &PySignal,
    samples: &PySamples,
    kernels: &PyKernels,
    grid: Vec<f64>,
) -> PyResult<(f64, f64)> {
    let k = kernels.inner.clone();
    py.detach(|| pwinterp::residual_norms(&signal.inner, &samples.inner, k.as_ref(), &grid)).py_err()
}

/// `{"ratio", "tail_fraction", "M"}`.
#[pyfunction]
fn frame_ratio<'py>(py: Python<'py>, family: &PyFamily, signal: &PySignal, m: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = pwinterp::frame_ratio(&family.inner, &signal.inner, m).py_err()?;
    let d = PyDict::new(py);
    d.set_item("ratio", r.ratio)?;
    d.set_item("tail_fraction", r.tail_fraction)?;
    d.set_item("M", r.m_max)?;
    Ok(d)
}

#[pyfunction]
fn littmann_coeffs(n: usize) -> Vec<C64> {
    pwinterp::littmann_coeffs(n)
}

/// Residual between a truncated sample sum and its spectral periodization.
#[pyfunction]
fn periodization_check(family: &PyFamily, member: usize, signal: &PySignal, a: f64, x: f64, trunc: usize) -> PyResult<f64> {
    pwinterp::periodization_check(&family.inner, member, &signal.inner, a, x, trunc).py_err()
}

/// Run a cross-check suite; returns a list of result dicts.
#[pyfunction]
fn verify<'py>(py: Python<'py>, suite: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let s: Suite = suite.parse().py_err()?;
    let checks = py.detach(|| s.run()).py_err()?;
    checks
        .into_iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("name", c.name)?;
            d.set_item("residual", c.residual)?;
            d.set_item("tolerance", c.tolerance)?;
            d.set_item("passed", c.passed)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn pwinterp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultiplier>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<DetProfile>()?;
    m.add_class::<PySignal>()?;
    m.add_class::<PySamples>()?;
    m.add_class::<PyKernels>()?;
    m.add_function(wrap_pyfunction!(sample_family, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(residual_norms, m)?)?;
    m.add_function(wrap_pyfunction!(frame_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(littmann_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(periodization_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("NoFormulaError", m.py().get_type::<NoFormulaError>())?;
    m.add("AccuracyError", m.py().get_type::<AccuracyError>())?;
    Ok(())
}
