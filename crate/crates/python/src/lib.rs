//! Python module `qcal`.

use pyo3::exceptions::{PyIOError, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use qcal_core::Complex64;

use qcal_core::lattice::{
    inner_product_alpha, norm_alpha, DEFAULT_GRID_HI, DEFAULT_GRID_LO, DEFAULT_MARGIN,
};
use qcal_core::oscillator::{self, CoherentForm};
use qcal_core::qcore::{self, Length, QNumberKind};
use qcal_core::verify::{self, Suite, SuiteConfig};
use qcal_core::QError;

fn py_err(e: QError) -> PyErr {
    match e {
        QError::InvalidParameter(_) | QError::Domain(_) | QError::Shape(_) => {
            PyValueError::new_err(e.to_string())
        }
        QError::Range { .. } => PyIndexError::new_err(e.to_string()),
        QError::Io(_) | QError::Csv(_) | QError::Json(_) => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qcal_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn context(q: f64, alpha: f64, tol: Option<f64>) -> PyResult<qcal_core::QContext> {
    let ctx = qcal_core::QContext::new(q, alpha).py()?;
    match tol {
        Some(t) => ctx.with_tol(t).py(),
        None => Ok(ctx),
    }
}

#[pyclass(name = "LatticeGrid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLatticeGrid {
    inner: qcal_core::LatticeGrid,
}

#[pymethods]
impl PyLatticeGrid {
    #[new]
    #[pyo3(signature = (q, alpha, lo = DEFAULT_GRID_LO, hi = DEFAULT_GRID_HI, margin = DEFAULT_MARGIN))]
    fn new(q: f64, alpha: f64, lo: i64, hi: i64, margin: usize) -> PyResult<Self> {
        let ctx = context(q, alpha, None)?;
        Ok(PyLatticeGrid {
            inner: qcal_core::LatticeGrid::new(ctx, lo, hi, margin).py()?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Lattice points in storage order (`+` block, then `-` block).
    fn points(&self) -> Vec<f64> {
        self.inner
            .points()
            .map(|(s, n)| self.inner.x(s, n))
            .collect()
    }

    #[getter]
    fn lo(&self) -> i64 {
        self.inner.n_lo()
    }

    #[getter]
    fn hi(&self) -> i64 {
        self.inner.n_hi()
    }

    fn __repr__(&self) -> String {
        format!(
            "LatticeGrid(q={}, alpha={}, lo={}, hi={}, margin={})",
            self.inner.ctx().q(),
            self.inner.ctx().alpha(),
            self.inner.n_lo(),
            self.inner.n_hi(),
            self.inner.margin()
        )
    }
}

#[pyclass(name = "GridFunction", frozen)]
struct PyGridFunction {
    inner: qcal_core::GridFunction,
}

#[pymethods]
impl PyGridFunction {
    /// Samples `values` (one per lattice point, storage order).
    #[new]
    fn new(grid: &PyLatticeGrid, values: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyGridFunction {
            inner: qcal_core::GridFunction::from_values(grid.inner, values).py()?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (path, q, alpha))]
    fn read_csv(path: &str, q: f64, alpha: f64) -> PyResult<Self> {
        let ctx = context(q, alpha, None)?;
        let file = std::fs::File::open(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(PyGridFunction {
            inner: qcal_core::GridFunction::read_csv(ctx, file, 0).py()?,
        })
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        let file = std::fs::File::create(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        self.inner.write_csv(file).py()
    }

    fn __len__(&self) -> usize {
        self.inner.values().len()
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn points(&self) -> Vec<f64> {
        let g = self.inner.grid();
        g.points().map(|(s, n)| g.x(s, n)).collect()
    }

    fn grid(&self) -> PyLatticeGrid {
        PyLatticeGrid {
            inner: *self.inner.grid(),
        }
    }

    /// `L^2_{alpha,q}` norm.
    fn norm(&self) -> f64 {
        norm_alpha(&self.inner)
    }

    fn inner_product(&self, other: &PyGridFunction) -> PyResult<Complex64> {
        inner_product_alpha(&self.inner, &other.inner).py()
    }

    fn __sub__(&self, other: &PyGridFunction) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: self.inner.sub(&other.inner).py()?,
        })
    }

    /// Annihilation operator `a` (result lives on the grid shrunk by one).
    fn apply_a(&self) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: oscillator::apply_a_grid(self.inner.grid().ctx(), &self.inner).py()?,
        })
    }

    /// Creation operator `a+`.
    fn apply_a_plus(&self) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: oscillator::apply_a_plus_grid(self.inner.grid().ctx(), &self.inner).py()?,
        })
    }
}

#[pyclass(name = "HermiteFamily", frozen)]
struct PyHermiteFamily {
    inner: qcal_core::HermiteFamily,
}

#[pymethods]
impl PyHermiteFamily {
    #[new]
    #[pyo3(signature = (q, alpha, n_max = qcal_core::hermite::DEFAULT_N_MAX, tol = None))]
    fn new(q: f64, alpha: f64, n_max: usize, tol: Option<f64>) -> PyResult<Self> {
        Ok(PyHermiteFamily {
            inner: qcal_core::HermiteFamily::new(context(q, alpha, tol)?, n_max).py()?,
        })
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.inner.n_max()
    }

    #[getter]
    fn c_alpha(&self) -> f64 {
        self.inner.c_alpha()
    }

    fn norm_constant(&self, n: usize) -> PyResult<f64> {
        self.inner.norm_constant(n).py()
    }

    fn htilde(&self, n: usize, x: f64) -> PyResult<f64> {
        self.inner.eval_htilde(n, x).py()
    }

    fn weight(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_weight(x).py()
    }

    fn wavefunction(&self, n: usize, x: f64) -> PyResult<f64> {
        self.inner.eval_wavefunction(n, x).py()
    }

    fn wavefunction_grid(&self, n: usize, grid: &PyLatticeGrid) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: self.inner.wavefunction_grid(n, &grid.inner).py()?,
        })
    }

    /// Coefficients `c_k` with `x^n = sum_k c_k h_(n-2k)(x)`.
    fn monomial_expand(&self, n: usize) -> PyResult<Vec<f64>> {
        self.inner.monomial_expand(n).py()
    }
}

#[pyclass(name = "CoherentState", frozen)]
struct PyCoherentState {
    inner: qcal_core::CoherentState,
}

#[pymethods]
impl PyCoherentState {
    /// Closed form by default; `terms` selects the truncated series instead.
    #[new]
    #[pyo3(signature = (q, alpha, zeta, terms = None))]
    fn new(q: f64, alpha: f64, zeta: Complex64, terms: Option<usize>) -> PyResult<Self> {
        let form = terms.map_or(CoherentForm::Closed, CoherentForm::Series);
        Ok(PyCoherentState {
            inner: qcal_core::CoherentState::new(context(q, alpha, None)?, zeta, form).py()?,
        })
    }

    fn eval(&self, x: f64) -> PyResult<Complex64> {
        self.inner.eval(x).py()
    }

    fn grid(&self, grid: &PyLatticeGrid) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: self.inner.grid(&grid.inner).py()?,
        })
    }
}

#[pyclass(name = "TransformPlan", frozen)]
struct PyTransformPlan {
    inner: qcal_core::TransformPlan,
}

#[pymethods]
impl PyTransformPlan {
    #[new]
    fn new(grid: &PyLatticeGrid) -> PyResult<Self> {
        Ok(PyTransformPlan {
            inner: qcal_core::TransformPlan::new(grid.inner).py()?,
        })
    }

    fn forward(&self, f: &PyGridFunction) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: self.inner.forward(&f.inner).py()?,
        })
    }

    fn inverse(&self, g: &PyGridFunction) -> PyResult<PyGridFunction> {
        Ok(PyGridFunction {
            inner: self.inner.inverse(&g.inner).py()?,
        })
    }
}

#[pyclass(name = "VerificationReport", frozen, get_all)]
struct PyReport {
    check: String,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
    json: String,
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(check={:?}, max_deviation={:e}, tolerance={:e}, passed={})",
            self.check, self.max_deviation, self.tolerance, self.passed
        )
    }
}

/// `(a; base)_n`, or the infinite product when `n` is omitted.
#[pyfunction]
#[pyo3(signature = (a, base, n = None))]
fn q_pochhammer(a: Complex64, base: f64, n: Option<usize>) -> PyResult<Complex64> {
    let len = n.map_or(Length::Infinite, Length::Finite);
    qcore::q_pochhammer(a, base, len, 10_000).py()
}

/// Basic `(1 - q^x)/(1 - q)` or symmetric `(q^x - q^-x)/(q - q^-1)` q-number.
#[pyfunction]
#[pyo3(signature = (q, x, symmetric = false))]
fn q_number(q: f64, x: f64, symmetric: bool) -> PyResult<f64> {
    let ctx = context(q, 0.0, None)?;
    let kind = if symmetric {
        QNumberKind::Symmetric
    } else {
        QNumberKind::Basic
    };
    Ok(qcore::q_number(&ctx, x, kind))
}

/// `n!_{q,alpha}`
#[pyfunction]
fn gen_q_factorial(q: f64, alpha: f64, n: usize) -> PyResult<f64> {
    Ok(qcore::gen_q_factorial(&context(q, alpha, None)?, n))
}

/// q-Dunkl kernel `psi_lambda(z)`.
#[pyfunction]
fn dunkl_kernel(q: f64, alpha: f64, lam: Complex64, z: Complex64) -> PyResult<Complex64> {
    qcore::dunkl_kernel(&context(q, alpha, None)?, lam, z).py()
}

#[pyfunction]
fn hamiltonian_energy(q: f64, alpha: f64, n: usize) -> PyResult<f64> {
    Ok(oscillator::hamiltonian_energy(&context(q, alpha, None)?, n))
}

#[pyfunction]
fn casimir_eigenvalue(q: f64, alpha: f64, n: usize) -> PyResult<f64> {
    Ok(oscillator::casimir_eigenvalue(&context(q, alpha, None)?, n))
}

/// Runs a named verification suite.
#[pyfunction]
#[pyo3(signature = (suite, q = verify::DEFAULT_Q, alpha = verify::DEFAULT_ALPHA, n_max = verify::DEFAULT_VERIFY_N_MAX, seed = verify::DEFAULT_SEED))]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    q: f64,
    alpha: f64,
    n_max: usize,
    seed: u64,
) -> PyResult<Vec<PyReport>> {
    let suite: Suite = suite.parse().py()?;
    let ctx = context(q, alpha, None)?;
    let cfg = SuiteConfig::new(ctx, n_max, qcal_core::LatticeGrid::default_for(ctx), seed);
    let reports = py.detach(|| verify::run(suite, &cfg)).py()?;
    Ok(reports
        .into_iter()
        .map(|r| PyReport {
            json: r.to_json_line(),
            check: r.check,
            max_deviation: r.max_deviation,
            tolerance: r.tolerance,
            passed: r.pass,
        })
        .collect())
}

#[pymodule]
fn qcal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLatticeGrid>()?;
    m.add_class::<PyGridFunction>()?;
    m.add_class::<PyHermiteFamily>()?;
    m.add_class::<PyCoherentState>()?;
    m.add_class::<PyTransformPlan>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(q_pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(q_number, m)?)?;
    m.add_function(wrap_pyfunction!(gen_q_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(dunkl_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian_energy, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
