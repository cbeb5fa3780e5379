use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shecke::braid::{self, BraidWord};
use shecke::cli::{self, Form};
use shecke::hecke::HeckeElem;
use shecke::{invariant as inv, singular, traces, verify};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A singular braid word on a fixed number of strands.
#[pyclass(name = "Braid", module = "shecke_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyBraid {
    inner: BraidWord,
}

#[pymethods]
impl PyBraid {
    #[new]
    #[pyo3(signature = (word, strands=None))]
    fn new(word: &str, strands: Option<usize>) -> PyResult<Self> {
        let inner = braid::parse(word, strands).map_err(value_err)?;
        Ok(PyBraid { inner })
    }

    #[getter]
    fn strands(&self) -> usize {
        self.inner.strands()
    }

    /// Number of singular points.
    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn epsilon(&self) -> i64 {
        self.inner.epsilon()
    }

    fn components(&self) -> usize {
        self.inner.closure_components()
    }

    fn resolutions(&self) -> Vec<(Vec<usize>, PyBraid)> {
        self.inner
            .resolutions()
            .into_iter()
            .map(|(s, w)| (s, PyBraid { inner: w }))
            .collect()
    }

    fn stabilize(&self, positive: bool) -> PyBraid {
        let sign = if positive {
            braid::Sign::Plus
        } else {
            braid::Sign::Minus
        };
        PyBraid {
            inner: self.inner.markov_stabilize(sign),
        }
    }

    fn rotate(&self) -> PyBraid {
        PyBraid {
            inner: self.inner.rotate(),
        }
    }

    fn markov_walk(&self, steps: usize, seed: u64) -> PyBraid {
        PyBraid {
            inner: braid::random_markov_walk(&self.inner, steps, seed),
        }
    }

    fn __str__(&self) -> String {
        self.inner.format()
    }

    fn __repr__(&self) -> String {
        format!(
            "Braid({:?}, strands={})",
            self.inner.format(),
            self.inner.strands()
        )
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[derive(FromPyObject)]
enum WordArg {
    Braid(PyBraid),
    Text(String),
}

impl WordArg {
    fn word(self) -> PyResult<BraidWord> {
        match self {
            WordArg::Braid(b) => Ok(b.inner),
            WordArg::Text(t) => cli::resolve_input(&t, None).map_err(value_err),
        }
    }
}

/// Element of the Hecke algebra of the braid group.
#[pyclass(name = "Hecke", module = "shecke_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyHecke {
    inner: HeckeElem,
}

#[pymethods]
impl PyHecke {
    #[staticmethod]
    fn identity(n: usize) -> PyHecke {
        PyHecke {
            inner: HeckeElem::identity(n),
        }
    }

    #[staticmethod]
    fn generator(n: usize, i: usize) -> PyResult<PyHecke> {
        let inner = HeckeElem::generator(n, i).map_err(value_err)?;
        Ok(PyHecke { inner })
    }

    #[staticmethod]
    fn from_word(word: WordArg) -> PyResult<PyHecke> {
        let inner = HeckeElem::from_word(&word.word()?).map_err(value_err)?;
        Ok(PyHecke { inner })
    }

    #[getter]
    fn strands(&self) -> usize {
        self.inner.strands()
    }

    fn trace(&self) -> String {
        self.inner.ocneanu_trace().to_string()
    }

    fn __add__(&self, other: &PyHecke) -> PyResult<PyHecke> {
        let inner = self.inner.try_add(&other.inner).map_err(value_err)?;
        Ok(PyHecke { inner })
    }

    fn __sub__(&self, other: &PyHecke) -> PyResult<PyHecke> {
        let neg = other.inner.scale(&-shecke::coeffs::RationalFn::one());
        let inner = self.inner.try_add(&neg).map_err(value_err)?;
        Ok(PyHecke { inner })
    }

    fn __mul__(&self, other: &PyHecke) -> PyResult<PyHecke> {
        let inner = self.inner.try_mul(&other.inner).map_err(value_err)?;
        Ok(PyHecke { inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Hecke({})", self.inner)
    }
}

fn form(name: &str) -> PyResult<Form> {
    match name {
        "canonical" => Ok(Form::Canonical),
        "raw" => Ok(Form::Raw),
        "resolution" => Ok(Form::Resolution),
        other => Err(value_err(format!("unknown form `{other}`"))),
    }
}

/// Invariant rendered as text.
#[pyfunction]
#[pyo3(signature = (word, form="canonical"))]
fn invariant(word: WordArg, form: &str) -> PyResult<String> {
    let p = cli::invariant_in_form(&word.word()?, self::form(form)?).map_err(value_err)?;
    Ok(p.to_string())
}

/// `(k, m, coeff)` for each nonzero coefficient of `X^k Y^m`.
#[pyfunction]
#[pyo3(signature = (word, form="canonical"))]
fn invariant_terms(word: WordArg, form: &str) -> PyResult<Vec<(usize, usize, String)>> {
    let p = cli::invariant_in_form(&word.word()?, self::form(form)?).map_err(value_err)?;
    Ok(p.entries()
        .into_iter()
        .map(|(k, m, c)| (k, m, c.to_string()))
        .collect())
}

#[pyfunction]
fn basis_invariants(word: WordArg) -> PyResult<Vec<String>> {
    let v = inv::basis_invariants(&word.word()?).map_err(value_err)?;
    Ok(v.iter().map(|c| c.to_string()).collect())
}

/// Values of the basis traces `T[0..=d]`.
#[pyfunction]
fn trace_vector(word: WordArg) -> PyResult<Vec<String>> {
    Ok(traces::trace_vector(&word.word()?)
        .iter()
        .map(|c| c.to_string())
        .collect())
}

#[pyfunction]
fn markov_class_eq(a: WordArg, b: WordArg) -> PyResult<bool> {
    traces::markov_class_eq(&a.word()?, &b.word()?).map_err(value_err)
}

#[pyfunction]
fn normal_form(word: WordArg) -> PyResult<String> {
    let w = word.word()?;
    if w.degree() == 0 {
        Ok(HeckeElem::from_word(&w).map_err(value_err)?.to_string())
    } else {
        Ok(singular::rewrite_to_spanning(&w).to_string())
    }
}

/// Runs a verification suite; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite, d=2, n=4, seed=1, trials=30))]
fn run_suite(
    suite: &str,
    d: usize,
    n: usize,
    seed: u64,
    trials: usize,
) -> PyResult<(bool, String)> {
    let opts = verify::VerifyOptions { d, n, seed, trials };
    let rep = verify::run_suite(suite, &opts).map_err(value_err)?;
    Ok((rep.passed(), rep.to_string()))
}

/// Built-in catalog as `(name, braid, components, expected)` tuples.
#[pyfunction]
fn catalog() -> Vec<(String, PyBraid, usize, Option<String>)> {
    cli::builtin_catalog()
        .into_iter()
        .map(|e| (e.name, PyBraid { inner: e.word }, e.components, e.expected))
        .collect()
}

#[pymodule]
fn shecke_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBraid>()?;
    m.add_class::<PyHecke>()?;
    m.add_function(wrap_pyfunction!(invariant, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_terms, m)?)?;
    m.add_function(wrap_pyfunction!(basis_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(trace_vector, m)?)?;
    m.add_function(wrap_pyfunction!(markov_class_eq, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
