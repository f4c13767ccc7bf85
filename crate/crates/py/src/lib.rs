//! Python bindings: instances and documents travel as JSON text, cohomology
//! numbers come back as Python integers.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use monadkit::cli::docs::{self, Document};
use monadkit::cli::instance::InstanceSpec;
use monadkit::cohomology::{self, LineBundleSum};
use monadkit::monad;
use monadkit::space::{MultiDegree, ProductSpace};

fn err(e: monadkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn space(factors: Vec<usize>) -> PyResult<ProductSpace> {
    ProductSpace::new(factors).map_err(err)
}

/// A pipeline result: a monad summary, a monad report or a certificate.
#[pyclass(name = "Document", frozen)]
struct PyDocument {
    inner: Document,
}

#[pymethods]
impl PyDocument {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    /// True for a valid monad or a positive certificate.
    #[getter]
    fn positive(&self) -> bool {
        self.inner.positive()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn summary(&self) -> String {
        monadkit::cli::summarize(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Document(kind={:?}, instance={:?})", self.inner.kind(), self.inner.instance().id())
    }
}

/// An instance: a monad family with its parameters and pipeline settings.
#[pyclass(name = "Instance")]
#[derive(Clone)]
struct PyInstance {
    inner: InstanceSpec,
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        InstanceSpec::from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (factors, k, seed = 0))]
    fn section3(factors: Vec<usize>, k: usize, seed: u64) -> Self {
        let mut inner = InstanceSpec::section3(&factors, k);
        inner.seed = seed;
        Self { inner }
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, l, alpha, beta, gamma, k, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn section4(n: usize, m: usize, l: usize, alpha: u32, beta: u32, gamma: u32, k: usize, seed: u64) -> Self {
        let mut inner = InstanceSpec::section4(n, m, l, alpha, beta, gamma, k);
        inner.seed = seed;
        Self { inner }
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn build(&self) -> PyResult<PyDocument> {
        wrap(docs::build_doc(&self.inner))
    }

    fn verify(&self) -> PyResult<PyDocument> {
        wrap(docs::verify_doc(&self.inner))
    }

    fn certify_stability(&self) -> PyResult<PyDocument> {
        wrap(docs::stability_doc(&self.inner))
    }

    fn certify_simplicity(&self) -> PyResult<PyDocument> {
        wrap(docs::simplicity_doc(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Instance({:?})", self.inner.id())
    }
}

fn wrap(r: monadkit::Result<Document>) -> PyResult<PyDocument> {
    r.map(|inner| PyDocument { inner }).map_err(err)
}

/// `h^p(X, O(d))` on `X = P^factors[0] x ...`.
#[pyfunction]
fn h_line(factors: Vec<usize>, degree: Vec<i64>, p: usize) -> PyResult<BigUint> {
    cohomology::h_line(&space(factors)?, &MultiDegree::new(degree), p).map_err(err)
}

/// `h^p` of a sum of line bundles given as `(degree, multiplicity)` pairs.
#[pyfunction]
fn h_sum(factors: Vec<usize>, summands: Vec<(Vec<i64>, u64)>, p: usize) -> PyResult<BigUint> {
    let g = LineBundleSum::from_summands(summands.into_iter().map(|(d, m)| (MultiDegree::new(d), m))).map_err(err)?;
    cohomology::h_sum(&space(factors)?, &g, p).map_err(err)
}

/// `nu` for `copies[j]` copies of `P^(2j+1)`.
#[pyfunction]
fn nu(copies: Vec<u32>) -> PyResult<u64> {
    monad::nu(&copies).map_err(err)
}

/// Which existence conditions hold for ranks `(a, b, c)` in dimension `n`.
#[pyfunction]
fn floystad_check(a: u64, b: u64, c: u64, n: u64) -> String {
    format!("{:?}", monad::floystad_check(a, b, c, n))
}

/// Recomputes a stored document; returns `(ok, [(check, passed), ...])`.
#[pyfunction]
fn recheck(text: &str) -> PyResult<(bool, Vec<(String, bool)>)> {
    let r = docs::recheck(text).map_err(err)?;
    Ok((r.ok(), r.checks))
}

/// Runs the oracle suites; returns `(name, cases, failures)` per suite.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn selftest(seed: u64) -> Vec<(String, usize, usize)> {
    monadkit::selftest::run_all(seed)
        .into_iter()
        .map(|s| (s.name, s.cases, s.failures))
        .collect()
}

#[pymodule]
fn monadkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyDocument>()?;
    m.add_function(wrap_pyfunction!(h_line, m)?)?;
    m.add_function(wrap_pyfunction!(h_sum, m)?)?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(floystad_check, m)?)?;
    m.add_function(wrap_pyfunction!(recheck, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("__version__", docs::VERSION)?;
    Ok(())
}
