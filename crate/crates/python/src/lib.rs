//! Python bindings: `import tambara`.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use tambara_core::gset::CoinductionPlan;
use tambara_core::oracle::{self, OrbitCap};
use tambara_core::transfer::{self, TransferFile};
use tambara_core::{expr, Error, Group, Limits, SubgroupLattice};

fn err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "json")?.call_method1("loads", (v.to_string(),))
}

/// Subgroup lattice of a built-in group such as `"S3"`, `"C2xC4"` or `"A5"`.
#[pyclass(frozen, name = "Lattice", module = "tambara")]
struct PyLattice {
    inner: Arc<SubgroupLattice>,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(group: &str) -> PyResult<Self> {
        let g = Group::builtin(group).map_err(err)?;
        Ok(PyLattice { inner: Arc::new(SubgroupLattice::new(g).map_err(err)?) })
    }

    #[getter]
    fn group(&self) -> String {
        self.inner.group().name().to_string()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group().order()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.len()).map(|s| self.inner.label(s).to_string()).collect()
    }

    fn subgroup_order(&self, label: &str) -> PyResult<usize> {
        Ok(self.inner.order(self.inner.resolve(label).map_err(err)?))
    }

    fn core(&self, label: &str) -> PyResult<String> {
        let s = self.inner.resolve(label).map_err(err)?;
        Ok(self.inner.label(self.inner.core(s)).to_string())
    }

    fn classes(&self) -> Vec<Vec<String>> {
        self.inner
            .classes()
            .iter()
            .map(|c| c.iter().map(|&s| self.inner.label(s).to_string()).collect())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({}, {} subgroups)", self.inner.group().name(), self.inner.len())
    }
}

#[pyclass(frozen, skip_from_py_object, name = "TransferSystem", module = "tambara")]
#[derive(Clone)]
struct PyTransferSystem {
    inner: transfer::TransferSystem,
}

#[pymethods]
impl PyTransferSystem {
    /// Smallest transfer system containing the given `(K, H)` label pairs.
    #[staticmethod]
    fn generate(lattice: &PyLattice, pairs: Vec<(String, String)>) -> PyResult<Self> {
        let lat = &lattice.inner;
        let resolved = pairs
            .iter()
            .map(|(k, h)| Ok((lat.resolve(k)?, lat.resolve(h)?)))
            .collect::<tambara_core::Result<Vec<_>>>()
            .map_err(err)?;
        let inner = transfer::TransferSystem::generate(lat.clone(), &resolved).map_err(err)?;
        Ok(PyTransferSystem { inner })
    }

    /// Build from the text format; the lattice must be the one named in the header.
    #[staticmethod]
    fn parse(lattice: &PyLattice, text: &str) -> PyResult<Self> {
        let file = TransferFile::parse(text).map_err(err)?;
        Ok(PyTransferSystem { inner: file.build(lattice.inner.clone()).map_err(err)? })
    }

    #[staticmethod]
    fn complete(lattice: &PyLattice) -> Self {
        PyTransferSystem { inner: transfer::TransferSystem::complete(lattice.inner.clone()) }
    }

    #[staticmethod]
    fn diagonal(lattice: &PyLattice) -> Self {
        PyTransferSystem { inner: transfer::TransferSystem::diagonal(lattice.inner.clone()) }
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice { inner: self.inner.lattice().clone() }
    }

    /// Number of non-reflexive arrows.
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn pairs(&self) -> Vec<(String, String)> {
        let lat = self.inner.lattice();
        self.inner
            .proper_pairs()
            .map(|(k, h)| (lat.label(k).to_string(), lat.label(h).to_string()))
            .collect()
    }

    fn relates(&self, k: &str, h: &str) -> PyResult<bool> {
        let lat = self.inner.lattice();
        Ok(self.inner.relates(lat.resolve(k).map_err(err)?, lat.resolve(h).map_err(err)?))
    }

    fn refines(&self, other: &PyTransferSystem) -> PyResult<bool> {
        self.inner.refines(&other.inner).map_err(err)
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = serde_json::to_value(self.inner.to_json()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        to_py(py, &v)
    }

    fn __eq__(&self, other: &PyTransferSystem) -> bool {
        self.inner.relation() == other.inner.relation()
            && Arc::ptr_eq(self.inner.lattice(), other.inner.lattice())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Every transfer system on the lattice, ordered by size.
#[pyfunction]
fn enumerate(lattice: &PyLattice) -> PyResult<Vec<PyTransferSystem>> {
    let all = transfer::enumerate(lattice.inner.clone(), &Limits::default()).map_err(err)?;
    Ok(all.into_iter().map(|inner| PyTransferSystem { inner }).collect())
}

/// `None` when the pair is compatible, otherwise the witness as a dict.
#[pyfunction]
fn compatible<'py>(py: Python<'py>, tm: &PyTransferSystem, ta: &PyTransferSystem) -> PyResult<Option<Bound<'py, PyAny>>> {
    let verdict = transfer::compatible(&tm.inner, &ta.inner).map_err(err)?;
    verdict
        .witness
        .map(|w| to_py(py, &w.to_json(tm.inner.lattice())))
        .transpose()
}

/// Coinduction oracle; returns `{"compatible": bool, "failing": dict | None, ...}`.
#[pyfunction]
#[pyo3(signature = (tm, ta, cap_extra = 0))]
fn coinduction_compatible<'py>(
    py: Python<'py>,
    tm: &PyTransferSystem,
    ta: &PyTransferSystem,
    cap_extra: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cap = if cap_extra == 0 { OrbitCap::Index } else { OrbitCap::IndexPlus(cap_extra) };
    let report = py
        .detach(|| oracle::coinduction_compatible(&tm.inner, &ta.inner, cap, &Limits::default()))
        .map_err(err)?;
    let lat = tm.inner.lattice();
    let v = serde_json::json!({
        "compatible": report.is_compatible(),
        "pairs_scanned": report.pairs_scanned,
        "instances": report.instances,
        "failing": report.failing.as_ref().map(|f| f.to_json(lat)),
    });
    to_py(py, &v)
}

/// Orbit profile of the coinduction of the K-set `kset` (e.g. `"3*[e/e]"`) to H,
/// as a list of `(stabilizer label, count)`.
#[pyfunction]
fn coinduce(lattice: &PyLattice, k: &str, h: &str, kset: &str) -> PyResult<Vec<(String, num_bigint::BigUint)>> {
    let lat = &lattice.inner;
    let (k, h) = (lat.resolve(k).map_err(err)?, lat.resolve(h).map_err(err)?);
    let x = expr::parse_kset(lat, k, kset).map_err(err)?;
    let plan = CoinductionPlan::new(lat.clone(), k, h).map_err(err)?;
    Ok(plan
        .stabilizer_counts(|j| x.fixed_count(j))
        .into_iter()
        .map(|(l, c)| (lat.label(l).to_string(), c))
        .collect())
}

/// Run both compatibility checks over every refining pair of the group.
#[pyfunction]
fn verify_equivalence<'py>(py: Python<'py>, lattice: &PyLattice) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| oracle::verify_equivalence(lattice.inner.clone(), &Limits::default()))
        .map_err(err)?;
    to_py(py, &report.to_json())
}

/// Burnside Tambara functor for a compatible pair.
#[pyclass(frozen, name = "Tambara", module = "tambara")]
struct PyTambara {
    inner: tambara_core::TambaraContext,
}

#[pymethods]
impl PyTambara {
    #[new]
    fn new(tm: &PyTransferSystem, ta: &PyTransferSystem) -> PyResult<Self> {
        let inner = tambara_core::TambaraContext::new(tm.inner.clone(), ta.inner.clone()).map_err(err)?;
        Ok(PyTambara { inner })
    }

    /// Evaluate an expression such as `"norm(e,C2,3*[e/e])"`; returns its display string.
    fn eval(&self, text: &str) -> PyResult<String> {
        Ok(expr::eval(&self.inner, text).map_err(err)?.display())
    }

    fn eval_json<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &expr::eval(&self.inner, text).map_err(err)?.to_json())
    }
}

#[pymodule]
fn tambara(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyTransferSystem>()?;
    m.add_class::<PyTambara>()?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(compatible, m)?)?;
    m.add_function(wrap_pyfunction!(coinduction_compatible, m)?)?;
    m.add_function(wrap_pyfunction!(coinduce, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivalence, m)?)?;
    Ok(())
}
