//! Python bindings for `minmat`.
//!
//! Configurations, matroids and X-systems are exposed as immutable classes. Structured reports
//! (decompositions, orbit classifications) come back as plain dictionaries built from the same
//! JSON the command-line tool writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use minmat::cli;
use minmat::io;
use minmat::symmetry::{are_isomorphic, automorphisms, canonical_form, orbit_classify};
use minmat::xmatroid::XSystem as CoreXSystem;
use minmat::{library, search, Error, PointSet};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) | Error::DepthExhausted(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn point_set(points: &[u8], d: usize) -> PyResult<PointSet> {
    let mut s = PointSet::EMPTY;
    for &p in points {
        if p == 0 || p as usize > d {
            return Err(to_py_err(Error::LabelOutOfRange { label: p as i64, d }));
        }
        s.insert(p);
    }
    Ok(s)
}

fn labels(s: PointSet) -> Vec<u32> {
    s.iter().map(u32::from).collect()
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A point-line configuration.
#[pyclass(module = "pyminmat", name = "Configuration", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyConfiguration {
    inner: minmat::Configuration,
}

#[pymethods]
impl PyConfiguration {
    /// Builds a configuration on `[d]` from lines given as lists of 1-based labels.
    #[new]
    fn new(d: usize, lines: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(PyConfiguration { inner: minmat::Configuration::new(d, &lines).map_err(to_py_err)? })
    }

    /// A configuration from the shipped library.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(PyConfiguration { inner: library::get(name).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyConfiguration { inner: io::parse_configuration_json(text).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        io::configuration_to_json(&self.inner)
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn lines(&self) -> Vec<Vec<u32>> {
        self.inner.lines().iter().map(|l| labels(*l)).collect()
    }

    fn rank(&self) -> u8 {
        self.inner.rank()
    }

    fn is_nilpotent(&self) -> bool {
        self.inner.is_nilpotent()
    }

    fn is_solvable(&self) -> bool {
        self.inner.is_solvable()
    }

    /// The matroid whose dependencies are exactly the collinear triples.
    fn matroid(&self) -> PyMatroid {
        PyMatroid { inner: minmat::Matroid::from_configuration(&self.inner) }
    }

    fn automorphism_order(&self) -> u128 {
        automorphisms(&self.inner).order()
    }

    /// All minimal matroids above this configuration, in canonical-form order.
    fn min_matroids(&self) -> PyResult<Vec<PyMatroid>> {
        let set = search::min_matroids(&self.inner).map_err(to_py_err)?;
        sorted(set.matroids())
    }

    fn min_a(&self) -> PyResult<Vec<PyMatroid>> {
        sorted(search::min_a(&self.inner).map_err(to_py_err)?)
    }

    fn min_b(&self) -> PyResult<Vec<PyConfiguration>> {
        let mut v = search::min_b(&self.inner).map_err(to_py_err)?;
        v.sort();
        Ok(v.into_iter().map(|inner| PyConfiguration { inner }).collect())
    }

    fn m_zero(&self) -> PyResult<Vec<u32>> {
        Ok(labels(search::m_zero(&self.inner).map_err(to_py_err)?))
    }

    /// Orbit sizes of `matroids` under the automorphism group, sorted as in reports.
    fn orbit_sizes(&self, matroids: Vec<PyMatroid>) -> Vec<usize> {
        let set: Vec<minmat::Matroid> = matroids.into_iter().map(|m| m.inner).collect();
        orbit_classify(&automorphisms(&self.inner), &set).iter().map(|o| o.size()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Configuration({})", io::configuration_to_json(&self.inner))
    }
}

fn sorted(ms: Vec<minmat::Matroid>) -> PyResult<Vec<PyMatroid>> {
    let mut keyed = ms
        .into_iter()
        .map(|m| Ok((canonical_form(&m)?, m)))
        .collect::<minmat::Result<Vec<_>>>()
        .map_err(to_py_err)?;
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, inner)| PyMatroid { inner }).collect())
}

/// A matroid of rank at most three: loops, parallel classes and lines over classes.
#[pyclass(module = "pyminmat", name = "Matroid", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMatroid {
    inner: minmat::Matroid,
}

#[pymethods]
impl PyMatroid {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMatroid { inner: io::parse_matroid_json(text).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn uniform_rank2(d: usize) -> PyResult<Self> {
        Ok(PyMatroid { inner: minmat::Matroid::uniform_rank2(d, PointSet::full(d)).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        io::matroid_to_json(&self.inner)
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn rank(&self) -> u8 {
        self.inner.rank()
    }

    #[getter]
    fn loops(&self) -> Vec<u32> {
        labels(self.inner.loops())
    }

    #[getter]
    fn classes(&self) -> Vec<Vec<u32>> {
        self.inner.classes().iter().map(|c| labels(*c)).collect()
    }

    /// Lines as sets of points (all members of each class on the line).
    #[getter]
    fn lines(&self) -> Vec<Vec<u32>> {
        self.inner.point_lines().iter().map(|l| labels(*l)).collect()
    }

    fn is_dependent(&self, points: Vec<u8>) -> PyResult<bool> {
        Ok(self.inner.is_dependent(point_set(&points, self.inner.d())?))
    }

    /// True when every dependent set of `self` is dependent in `other`.
    fn dependency_leq(&self, other: &PyMatroid) -> PyResult<bool> {
        self.inner.dependency_leq(&other.inner).map_err(to_py_err)
    }

    fn add_loop(&self, point: u8) -> PyResult<PyMatroid> {
        Ok(PyMatroid { inner: self.inner.add_loop(point).map_err(to_py_err)? })
    }

    fn canonical_form(&self) -> PyResult<PyMatroid> {
        Ok(PyMatroid { inner: canonical_form(&self.inner).map_err(to_py_err)? })
    }

    fn is_isomorphic(&self, other: &PyMatroid) -> PyResult<bool> {
        are_isomorphic(&self.inner, &other.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Matroid({})", cli::describe_matroid(&self.inner))
    }
}

/// A family of triples that should all be circuits.
#[pyclass(module = "pyminmat", name = "XSystem", frozen)]
struct PyXSystem {
    inner: CoreXSystem,
}

#[pymethods]
impl PyXSystem {
    #[new]
    fn new(d: usize, family: Vec<Vec<u8>>) -> PyResult<Self> {
        let sets = family.iter().map(|x| point_set(x, d)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyXSystem { inner: CoreXSystem::new(d, sets).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyXSystem { inner: io::parse_xsystem_json(text).map_err(to_py_err)? })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    /// The X-sequence bound of a subset; `None` means the whole ground set.
    #[pyo3(signature = (points=None))]
    fn val(&self, points: Option<Vec<u8>>) -> PyResult<i32> {
        let s = match points {
            Some(p) => point_set(&p, self.inner.d())?,
            None => PointSet::full(self.inner.d()),
        };
        Ok(self.inner.val_x(s))
    }

    /// Values for every subset, indexed by bitmask (bit `i - 1` stands for point `i`).
    fn val_table(&self) -> PyResult<Vec<i32>> {
        self.inner.val_table().map_err(to_py_err)
    }

    #[pyo3(signature = (points=None))]
    fn v(&self, points: Option<Vec<u8>>) -> PyResult<i32> {
        let s = match points {
            Some(p) => point_set(&p, self.inner.d())?,
            None => PointSet::full(self.inner.d()),
        };
        Ok(self.inner.v_x().map_err(to_py_err)?[s.bits() as usize])
    }

    fn v_table(&self) -> PyResult<Vec<i32>> {
        Ok(self.inner.v_x().map_err(to_py_err)?.to_vec())
    }

    fn minimal_x_matroids(&self) -> PyResult<Vec<PyMatroid>> {
        sorted(self.inner.minimal_x_matroids_rank3().map_err(to_py_err)?)
    }
}

/// Names of the shipped configurations.
#[pyfunction]
fn library_names() -> Vec<&'static str> {
    library::names()
}

/// Decomposition report as a dictionary, identical to the `decompose --json` output.
#[pyfunction]
#[pyo3(signature = (config, facts="shipped", depth=minmat::variety::DEFAULT_DEPTH))]
fn decompose<'py>(py: Python<'py>, config: &PyConfiguration, facts: &str, depth: usize) -> PyResult<Bound<'py, PyAny>> {
    let table = cli::load_facts(facts).map_err(to_py_err)?;
    let report = cli::report_decompose(&config.inner, &table, facts, depth).map_err(to_py_err)?;
    report.outcome.map_err(to_py_err)?;
    json_to_py(py, &report.json)
}

/// Runs the command-line tool in-process. Returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("minmat".to_string()).chain(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
pub fn pyminmat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfiguration>()?;
    m.add_class::<PyMatroid>()?;
    m.add_class::<PyXSystem>()?;
    m.add_function(wrap_pyfunction!(library_names, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
