//! Python bindings. Reports cross the boundary as JSON strings with the same
//! schema the command line prints; presentations are a small wrapper class.

use std::collections::BTreeMap;

use orbcoh::algebra::{nilpotency_index, normal_form, poincare, render_lincomb, same_ideal};
use orbcoh::classify::Classifier;
use orbcoh::index::SpaceDescriptor;
use orbcoh::{report, FieldTag};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(pyorbcoh, OrbcohError, PyException);

fn err(e: orbcoh::Error) -> PyErr {
    OrbcohError::new_err(e.to_string())
}

fn field(coeff: &str) -> PyResult<FieldTag> {
    coeff.parse().map_err(|e: orbcoh::Error| PyValueError::new_err(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| OrbcohError::new_err(e.to_string()))
}

fn classifier() -> PyResult<Classifier> {
    Classifier::from_env().map_err(err)
}

/// A finitely presented graded-commutative algebra.
#[pyclass(name = "Presentation", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPresentation {
    inner: orbcoh::algebra::Presentation,
}

#[pymethods]
impl PyPresentation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| OrbcohError::new_err(e.to_string()))?;
        Ok(PyPresentation { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.inner)
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    /// Degree to dimension of the quotient up to the truncation.
    fn poincare(&self) -> PyResult<BTreeMap<u32, usize>> {
        Ok(poincare(&self.inner).map_err(err)?.dims)
    }

    fn normal_form(&self, word: &str) -> PyResult<String> {
        let lc = normal_form(&self.inner, word).map_err(err)?;
        Ok(render_lincomb(&self.inner, &lc))
    }

    fn nilpotency_index(&self, generator: &str) -> PyResult<u32> {
        nilpotency_index(&self.inner, generator).map_err(err)
    }

    fn same_ideal(&self, other: &PyPresentation) -> PyResult<bool> {
        same_ideal(&self.inner, &other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Presentation({})", self.inner.render())
    }

    fn __eq__(&self, other: &PyPresentation) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn congruence_precheck(d: u32, n: u32, m: u32) -> bool {
    orbcoh::gysin::congruence_precheck(d, n, m)
}

#[pyfunction]
fn chase(d: u32, n: u32, m: u32) -> PyResult<String> {
    to_json(&report::chase_report(d, n, m).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, n, m, coeff = "z2"))]
fn ss(d: u32, n: u32, m: u32, coeff: &str) -> PyResult<String> {
    to_json(&report::ss_report(d, n, m, field(coeff)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, n, m, coeff = "z2"))]
fn classify(d: u32, n: u32, m: u32, coeff: &str) -> PyResult<String> {
    to_json(&report::classify_report(&classifier()?, d, n, m, field(coeff)?).map_err(err)?)
}

/// Ring templates of `classify` as presentation objects.
#[pyfunction]
#[pyo3(signature = (d, n, m, coeff = "z2"))]
fn classify_rings(d: u32, n: u32, m: u32, coeff: &str) -> PyResult<Vec<(String, PyPresentation)>> {
    let families = classifier()?.classify(d, n, m, field(coeff)?).map_err(err)?;
    Ok(families.into_iter().map(|f| (f.source_case, PyPresentation { inner: f.template })).collect())
}

/// `space` is a JSON space descriptor, e.g. `{"kind": "standard_sphere", "d": 3, "total_dim": 43}`.
#[pyfunction]
fn index(space: &str) -> PyResult<String> {
    let space: SpaceDescriptor = serde_json::from_str(space).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_json(&report::index_output(&classifier()?, space).map_err(err)?)
}

#[pyfunction]
fn ind_standard_sphere(d: u32, total_dim: u32) -> PyResult<u32> {
    orbcoh::index::ind_standard_sphere(d, total_dim).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (grid_max = 20))]
fn verify(py: Python<'_>, grid_max: u32) -> PyResult<String> {
    let c = classifier()?;
    let report = py.detach(|| c.verify(grid_max));
    to_json(&report)
}

#[pymodule]
fn pyorbcoh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("OrbcohError", m.py().get_type::<OrbcohError>())?;
    m.add("SCHEMA_VERSION", orbcoh::classify::SCHEMA_VERSION)?;
    m.add_class::<PyPresentation>()?;
    m.add_function(wrap_pyfunction!(congruence_precheck, m)?)?;
    m.add_function(wrap_pyfunction!(chase, m)?)?;
    m.add_function(wrap_pyfunction!(ss, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_rings, m)?)?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(ind_standard_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
