//! Python bindings. Structured results cross the boundary as JSON and come
//! out as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cluster_sing::classifier::{self, CoefficientPoint, SingularityReport};
use cluster_sing::oracle::{self, FiberInstance};
use cluster_sing::presentations::{self, Family, Presentation};
use cluster_sing::seeds::{ExtendedExchangeMatrix, LabeledSeed};

fn err(e: cluster_sing::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).expect("serializable");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn family(ty: &str, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<Family> {
    Family::new(ty, n, a, b).map_err(err)
}

fn point(p: u64, eta: Vec<i64>) -> PyResult<CoefficientPoint> {
    CoefficientPoint::new(p, &eta).map_err(err)
}

#[pyclass(name = "Seed", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySeed {
    inner: LabeledSeed,
}

#[pymethods]
impl PySeed {
    /// Seed from an extended exchange matrix with n mutable columns.
    #[new]
    #[pyo3(signature = (rows, n=None))]
    fn new(rows: Vec<Vec<i64>>, n: Option<usize>) -> PyResult<Self> {
        let n = n.unwrap_or(rows.first().map_or(0, |r| r.len()));
        let m = ExtendedExchangeMatrix::new(rows, n).map_err(err)?;
        Ok(Self { inner: LabeledSeed::from_matrix(m) })
    }

    #[staticmethod]
    #[pyo3(signature = (ty, n=None, a=None, b=None))]
    fn of_type(ty: &str, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<Self> {
        Ok(Self { inner: family(ty, n, a, b)?.seed().map_err(err)? })
    }

    fn with_principal_coefficients(&self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.with_principal_coefficients().map_err(err)? })
    }

    fn with_generic_coefficients(&self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.with_generic_coefficients().map_err(err)? })
    }

    /// (mutated seed, exchange relation as text)
    fn mutate(&self, k: usize) -> PyResult<(Self, String)> {
        let (s, rel) = self.inner.mutate(k).map_err(err)?;
        Ok((Self { inner: s }, rel.to_string()))
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix().entries().to_vec()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn presentation(&self) -> PyResult<PyPresentation> {
        Ok(PyPresentation { inner: presentations::bfz_presentation(&self.inner).map_err(err)? })
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.to_json()).expect("serializable"))
    }

    fn __repr__(&self) -> String {
        format!("Seed(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

#[pyclass(name = "Presentation", frozen)]
struct PyPresentation {
    inner: Presentation,
}

#[pymethods]
impl PyPresentation {
    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.registry.names().to_vec()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators.iter().map(|g| g.to_string()).collect()
    }

    #[getter]
    fn expected_fiber_dim(&self) -> i64 {
        self.inner.expected_fiber_dim
    }

    /// Rational singular points of the fiber over η, by brute force.
    #[pyo3(signature = (p, eta, budget=None))]
    fn singular_points(&self, p: u64, eta: Vec<i64>, budget: Option<u128>) -> PyResult<(Vec<String>, Vec<Vec<u64>>)> {
        let fi = FiberInstance::new(self.inner.clone(), point(p, eta)?).map_err(err)?;
        let s = oracle::singular_points(&fi, budget.unwrap_or_else(oracle::default_budget)).map_err(err)?;
        Ok((s.vars, s.points))
    }

    fn __repr__(&self) -> String {
        format!("Presentation({} vars, {} generators)", self.inner.registry.len(), self.inner.generators.len())
    }
}

#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: SingularityReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.verdict.kind()
    }

    #[getter]
    fn summary(&self) -> String {
        self.inner.verdict.summary()
    }

    #[getter]
    fn stratum(&self) -> String {
        self.inner.stratum.clone()
    }

    #[getter]
    fn is_singular(&self) -> bool {
        self.inner.verdict.is_singular()
    }

    fn locus(&self) -> Vec<Vec<String>> {
        self.inner.locus.iter().map(|c| c.equations.iter().map(|e| e.to_string()).collect()).collect()
    }

    /// None when no Hessian witness ships with the report.
    fn hessian_certified(&self) -> PyResult<Option<bool>> {
        oracle::hessian_certify(&self.inner).map_err(err)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Report({}: {})", self.inner.family, self.inner.verdict.summary())
    }
}

#[pyfunction]
#[pyo3(signature = (ty, n=None, a=None, b=None))]
fn reduced_presentation(ty: &str, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<PyPresentation> {
    Ok(PyPresentation { inner: presentations::reduced_presentation(family(ty, n, a, b)?).map_err(err)? })
}

/// True iff every identity of the reduction witness holds.
#[pyfunction]
#[pyo3(signature = (ty, n=None, a=None, b=None))]
fn verify_reduction(ty: &str, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<bool> {
    Ok(presentations::verify_reduction(family(ty, n, a, b)?).map_err(err)?.passed())
}

#[pyfunction]
#[pyo3(signature = (ty, p, eta, n=None, a=None, b=None))]
fn classify(ty: &str, p: u64, eta: Vec<i64>, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<PyReport> {
    let f = family(ty, n, a, b)?;
    Ok(PyReport { inner: classifier::classify(f, &point(p, eta)?).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (ty, p, n=None, a=None, b=None))]
fn stratify(py: Python<'_>, ty: &str, p: u64, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> PyResult<Py<PyAny>> {
    let st = classifier::stratify(family(ty, n, a, b)?, p).map_err(err)?;
    to_py(py, &serde_json::Value::Array(st.iter().map(|s| s.to_json()).collect()))
}

/// Brute-force comparison over all η; returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (ty, p, n=None, a=None, b=None, budget=None))]
fn diff_against_classifier(
    py: Python<'_>,
    ty: &str,
    p: u64,
    n: Option<usize>,
    a: Option<i64>,
    b: Option<i64>,
    budget: Option<u128>,
) -> PyResult<Py<PyAny>> {
    let f = family(ty, n, a, b)?;
    let budget = budget.unwrap_or_else(oracle::default_budget);
    let rep = py.detach(|| oracle::diff_against_classifier(f, p, budget)).map_err(err)?;
    to_py(py, &rep.to_json())
}

#[pyfunction]
fn continuant(n: usize) -> PyResult<String> {
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let reg = cluster_sing::algebra_core::VarRegistry::split::<String>(&names, &[]).map_err(err)?;
    Ok(presentations::continuant_named(&reg, &names).map_err(err)?.to_string())
}

#[pymodule]
fn cluster_sing_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeed>()?;
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(reduced_presentation, m)?)?;
    m.add_function(wrap_pyfunction!(verify_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(stratify, m)?)?;
    m.add_function(wrap_pyfunction!(diff_against_classifier, m)?)?;
    m.add_function(wrap_pyfunction!(continuant, m)?)?;
    Ok(())
}
