//! Python bindings: the `kstab` extension module.
//!
//! Rationals cross the boundary as `fractions.Fraction`, directions and
//! rays as lists of ints.

use kstab::document::{catalog_document, catalog_names, CurveDocument, InputDocument, ReportDocument};
use kstab::invariants::{self, okounkov_barycenter_check, profile, scalars, Witnessed};
use kstab::quantized::{self, QuantizedSlice, DEFAULT_SEARCH_RADIUS};
use kstab::rat::{format_rat, parse_rat, Rat};
use kstab::{Error, ToricValuation};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(kstab, KstabError, PyValueError, "Invalid input to a kstab computation.");
create_exception!(kstab, NotFanoError, KstabError, "The rays do not define a toric Fano variety.");
create_exception!(kstab, DimensionError, KstabError, "Dimension outside the supported range 1..=4.");

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NotFano(_) | Error::NotFullDimensional | Error::OriginNotInterior => {
            NotFanoError::new_err(e.to_string())
        }
        Error::DimensionCap(_) => DimensionError::new_err(e.to_string()),
        _ => KstabError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, x: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rat(x),))
}

fn fractions<'py>(py: Python<'py>, xs: &[Rat]) -> PyResult<Bound<'py, PyList>> {
    let items = xs.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Accepts an int, a `Fraction`, or a `"p/q"` string.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    parse_rat(&x.str()?.to_string()).map_err(to_py_err)
}

fn witnessed<'py>(py: Python<'py>, w: &Witnessed) -> PyResult<(Bound<'py, PyAny>, Vec<i64>)> {
    Ok((fraction(py, &w.value)?, w.witness.as_slice().to_vec()))
}

fn valuation(u: Vec<i64>) -> PyResult<ToricValuation> {
    ToricValuation::new(u).map_err(to_py_err)
}

/// A toric Fano variety given by the primitive ray generators of its fan.
#[pyclass(name = "ToricFano", module = "kstab", frozen)]
struct PyToricFano {
    inner: kstab::ToricFano,
}

impl PyToricFano {
    fn check_len(&self, u: &[i64]) -> PyResult<()> {
        if u.len() != self.inner.dim() {
            return Err(KstabError::new_err(format!(
                "direction has length {}, expected {}",
                u.len(),
                self.inner.dim()
            )));
        }
        Ok(())
    }
}

#[pymethods]
impl PyToricFano {
    #[new]
    #[pyo3(signature = (rays, name = None))]
    fn new(rays: Vec<Vec<i64>>, name: Option<String>) -> PyResult<Self> {
        let inner = kstab::ToricFano::build_named(name.as_deref().unwrap_or(""), rays).map_err(to_py_err)?;
        Ok(PyToricFano { inner })
    }

    /// A built-in instance: P1, P2, P1xP1, F1, dP7, dP6, P3 or P113.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        let inner = catalog_document(name).and_then(|d| d.build()).map_err(to_py_err)?;
        Ok(PyToricFano { inner })
    }

    /// Builds from a JSON input document with `rays` or `polytope_vertices`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = InputDocument::parse(text).and_then(|d| d.build()).map_err(to_py_err)?;
        Ok(PyToricFano { inner })
    }

    fn to_json(&self) -> String {
        InputDocument::from_rays(self.inner.name(), self.inner.rays().to_vec()).to_json()
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.rays().to_vec()
    }

    /// `(-K_X)^n`.
    #[getter]
    fn degree<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.degree())
    }

    #[getter]
    fn barycenter<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.barycenter())
    }

    #[getter]
    fn cartier_index(&self) -> u64 {
        self.inner.cartier_index()
    }

    /// Vertices of the anticanonical polytope.
    fn section_polytope_vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.inner
            .section_polytope()
            .vertices()
            .iter()
            .map(|v| fractions(py, v))
            .collect()
    }

    /// `A`, `tau`, `S` along a primitive direction, as a dict of fractions.
    fn scalars<'py>(&self, py: Python<'py>, u: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        self.check_len(&u)?;
        valuation(u.clone())?;
        let sc = scalars(&self.inner, &u);
        let d = PyDict::new(py);
        d.set_item("A", fraction(py, &sc.a)?)?;
        d.set_item("tau", fraction(py, &sc.tau)?)?;
        d.set_item("S", fraction(py, &sc.s)?)?;
        Ok(d)
    }

    /// `A`, `tau`, `S`, `beta`, `j` and the volume curve pieces
    /// `(lo, hi, coefficients)` along a primitive direction.
    fn profile<'py>(&self, py: Python<'py>, u: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        self.check_len(&u)?;
        let p = profile(&self.inner, &valuation(u)?).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("A", fraction(py, &p.a)?)?;
        d.set_item("tau", fraction(py, &p.tau)?)?;
        d.set_item("S", fraction(py, &p.s)?)?;
        d.set_item("beta", fraction(py, &p.beta)?)?;
        d.set_item("j", fraction(py, &p.j)?)?;
        let pieces = p
            .curve
            .pieces
            .iter()
            .map(|c| Ok((fraction(py, &c.lo)?, fraction(py, &c.hi)?, fractions(py, c.poly.coeffs())?)))
            .collect::<PyResult<Vec<_>>>()?;
        d.set_item("curve", pieces)?;
        Ok(d)
    }

    /// `(delta, witness)`.
    fn delta<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<i64>)> {
        witnessed(py, &invariants::delta(&self.inner))
    }

    fn alpha_bound<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<i64>)> {
        witnessed(py, &invariants::alpha_bound(&self.inner))
    }

    fn uniform_margin<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<i64>)> {
        witnessed(py, &invariants::uniform_margin(&self.inner))
    }

    fn uniform_epsilon<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &invariants::uniform_epsilon(&self.inner))
    }

    #[pyo3(signature = (search_radius = DEFAULT_SEARCH_RADIUS))]
    fn verdict(&self, py: Python<'_>, search_radius: i64) -> PyResult<String> {
        let x = &self.inner;
        py.detach(|| invariants::verdict(x, search_radius))
            .map(|r| r.verdict.to_string())
            .map_err(to_py_err)
    }

    /// The full report as `json`, `csv` or `text`.
    #[pyo3(signature = (search_radius = DEFAULT_SEARCH_RADIUS, format = "json"))]
    fn report(&self, py: Python<'_>, search_radius: i64, format: &str) -> PyResult<String> {
        let x = &self.inner;
        let r = py.detach(|| ReportDocument::compute(x, search_radius)).map_err(to_py_err)?;
        match format {
            "json" => Ok(r.to_json()),
            "csv" => Ok(r.to_csv()),
            "text" => Ok(r.to_text()),
            other => Err(KstabError::new_err(format!("unknown format {other:?}"))),
        }
    }

    /// `h^0(-kK_X)`.
    fn n_k(&self, k: u64) -> PyResult<usize> {
        Ok(QuantizedSlice::new(&self.inner, k).map_err(to_py_err)?.n_k())
    }

    fn s_k<'py>(&self, py: Python<'py>, k: u64, u: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        self.check_len(&u)?;
        let s = quantized::sk_sum(&self.inner, k, &valuation(u)?).map_err(to_py_err)?;
        fraction(py, &s)
    }

    /// `(delta_k, witness)` over the rays and the box of the given radius.
    #[pyo3(signature = (k, search_radius = DEFAULT_SEARCH_RADIUS))]
    fn delta_k<'py>(&self, py: Python<'py>, k: u64, search_radius: i64) -> PyResult<(Bound<'py, PyAny>, Vec<i64>)> {
        let x = &self.inner;
        let w = py.detach(|| quantized::delta_k(x, k, search_radius)).map_err(to_py_err)?;
        witnessed(py, &w)
    }

    /// Barycenter of the sliced body along `u` from `eps`, with its bounds.
    #[pyo3(signature = (u, eps = None))]
    fn okounkov_check<'py>(
        &self,
        py: Python<'py>,
        u: Vec<i64>,
        eps: Option<&Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        self.check_len(&u)?;
        let eps = eps.map(rational).transpose()?.unwrap_or_default();
        let c = okounkov_barycenter_check(&self.inner, &valuation(u)?, &eps).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("b1", fraction(py, &c.b1)?)?;
        d.set_item("hammer_lower", fraction(py, &c.hammer_lower)?)?;
        d.set_item("hammer_upper", fraction(py, &c.hammer_upper)?)?;
        d.set_item("slice_ratio", fraction(py, &c.slice_ratio)?)?;
        d.set_item("slice_identity_ok", c.slice_identity_ok)?;
        Ok(d)
    }

    /// The curve document as JSON.
    #[pyo3(signature = (u, eps = None))]
    fn curve_json(&self, u: Vec<i64>, eps: Option<&Bound<'_, PyAny>>) -> PyResult<String> {
        let eps = eps.map(rational).transpose()?.unwrap_or_default();
        let (doc, _) = CurveDocument::compute(&self.inner, &u, &eps).map_err(to_py_err)?;
        Ok(doc.to_json())
    }

    fn __repr__(&self) -> String {
        format!("ToricFano({:?}, name={:?})", self.inner.rays(), self.inner.name())
    }
}

#[pyfunction(name = "catalog_names")]
fn py_catalog_names() -> Vec<&'static str> {
    catalog_names()
}

#[pymodule(name = "kstab")]
fn kstab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyToricFano>()?;
    m.add_function(wrap_pyfunction!(py_catalog_names, m)?)?;
    m.add("KstabError", py.get_type::<KstabError>())?;
    m.add("NotFanoError", py.get_type::<NotFanoError>())?;
    m.add("DimensionError", py.get_type::<DimensionError>())?;
    m.add("ASSUMPTION_NOTE", invariants::ASSUMPTION_NOTE)?;
    Ok(())
}
