//! Python bindings. Selections are lists of item ids, count vectors are
//! lists of ints indexed by level - 1, valuations are `fractions.Fraction`s.

use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use qknap::dominance::{self, Valuation};
use qknap::dp::{self, FrontierResult, LabelMatrix};
use qknap::greedy::{self, GreedyResult};
use qknap::io::{self, CapacityMode, GeneratorParams};
use qknap::model::{self, RankCardinalityVector, Subset};
use qknap::{oracle, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::OracleGuard { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn subset(ids: Vec<u64>) -> PyResult<Subset> {
    Subset::new(ids).map_err(to_py)
}

fn ids(s: &Subset) -> Vec<u64> {
    s.ids().iter().map(|i| i.0).collect()
}

fn vector(counts: Vec<u32>) -> RankCardinalityVector {
    RankCardinalityVector(counts)
}

#[pyclass(name = "Item", module = "qknap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyItem {
    #[pyo3(get)]
    id: u64,
    #[pyo3(get)]
    weight: u64,
    #[pyo3(get)]
    level: u32,
}

#[pymethods]
impl PyItem {
    #[new]
    fn new(id: u64, weight: u64, level: u32) -> Self {
        PyItem { id, weight, level }
    }

    fn __repr__(&self) -> String {
        format!("Item(id={}, weight={}, level={})", self.id, self.weight, self.level)
    }
}

#[pyclass(name = "Instance", module = "qknap", frozen, skip_from_py_object)]
struct PyInstance {
    inner: model::Instance,
}

#[pymethods]
impl PyInstance {
    /// `items` holds `Item` objects or `(id, weight, level)` tuples.
    #[new]
    fn new(levels: usize, capacity: u64, items: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let items = items
            .iter()
            .map(|obj| {
                if let Ok(item) = obj.cast::<PyItem>() {
                    let item = item.get();
                    Ok(model::Item::new(item.id, item.weight, item.level))
                } else {
                    let (id, weight, level): (u64, u64, u32) = obj.extract()?;
                    Ok(model::Item::new(id, weight, level))
                }
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = model::Instance::new(levels, capacity, items).map_err(to_py)?;
        Ok(PyInstance { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = io::parse_instance(text).map_err(to_py)?;
        Ok(PyInstance { inner })
    }

    fn to_text(&self) -> String {
        io::serialize_instance(&self.inner)
    }

    #[getter]
    fn levels(&self) -> usize {
        self.inner.levels()
    }

    #[getter]
    fn capacity(&self) -> u64 {
        self.inner.capacity()
    }

    #[getter]
    fn items(&self) -> Vec<PyItem> {
        self.inner
            .items()
            .iter()
            .map(|it| PyItem {
                id: it.id.0,
                weight: it.weight,
                level: it.level.0,
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn rank_cardinality_vector(&self, ids: Vec<u64>) -> PyResult<Vec<u32>> {
        let g = self.inner.rank_cardinality_vector(&subset(ids)?).map_err(to_py)?;
        Ok(g.0)
    }

    fn total_weight(&self, ids: Vec<u64>) -> PyResult<u64> {
        self.inner.total_weight(&subset(ids)?).map_err(to_py)
    }

    fn is_feasible(&self, ids: Vec<u64>) -> PyResult<bool> {
        self.inner.is_feasible(&subset(ids)?).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(levels={}, capacity={}, n={})",
            self.inner.levels(),
            self.inner.capacity(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "Label", module = "qknap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLabel {
    #[pyo3(get)]
    vector: Vec<u32>,
    #[pyo3(get)]
    weight: u64,
    #[pyo3(get)]
    items: Vec<u64>,
}

#[pymethods]
impl PyLabel {
    fn __repr__(&self) -> String {
        format!("Label(vector={:?}, weight={}, items={:?})", self.vector, self.weight, self.items)
    }
}

fn labels(ls: &[model::Label]) -> Vec<PyLabel> {
    ls.iter()
        .map(|l| PyLabel {
            vector: l.vector.0.clone(),
            weight: l.weight,
            items: ids(&l.representative),
        })
        .collect()
}

#[pyclass(name = "Frontier", module = "qknap", frozen, skip_from_py_object)]
struct PyFrontier {
    inner: FrontierResult,
    matrix: Option<LabelMatrix>,
}

#[pymethods]
impl PyFrontier {
    #[getter]
    fn labels(&self) -> Vec<PyLabel> {
        labels(&self.inner.labels)
    }

    #[getter]
    fn vectors(&self) -> Vec<Vec<u32>> {
        self.inner.labels.iter().map(|l| l.vector.0.clone()).collect()
    }

    #[getter]
    fn cells(&self) -> u64 {
        self.inner.stats.cells
    }

    #[getter]
    fn max_cell(&self) -> usize {
        self.inner.stats.max_cell
    }

    #[getter]
    fn comparisons(&self) -> u64 {
        self.inner.stats.comparisons
    }

    #[getter]
    fn elapsed_ms(&self) -> f64 {
        self.inner.stats.elapsed.as_secs_f64() * 1e3
    }

    /// Table cell `(i, x)`; only available from `solve(..., matrix=True)`.
    fn cell(&self, i: usize, x: usize) -> PyResult<Vec<PyLabel>> {
        let m = self
            .matrix
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("solve with matrix=True to keep cells"))?;
        if i >= m.rows() || x >= m.columns() {
            return Err(PyValueError::new_err(format!("cell ({i}, {x}) out of range")));
        }
        Ok(labels(m.cell(i, x)))
    }

    fn to_text(&self) -> String {
        match &self.matrix {
            Some(m) => io::serialize_frontier_with_matrix(&self.inner, m),
            None => io::serialize_frontier(&self.inner),
        }
    }

    fn to_json(&self) -> String {
        io::frontier_json(&self.inner, self.matrix.as_ref())
    }

    fn __len__(&self) -> usize {
        self.inner.labels.len()
    }
}

#[pyclass(name = "GreedyResult", module = "qknap", frozen, skip_from_py_object)]
struct PyGreedyResult {
    #[pyo3(get)]
    items: Vec<u64>,
    #[pyo3(get)]
    vector: Vec<u32>,
    #[pyo3(get)]
    weight: u64,
    /// `"Efficient"`, `"EfficientBecauseFull"` or `"NoGuarantee"`.
    #[pyo3(get)]
    guarantee: String,
}

#[pymethods]
impl PyGreedyResult {
    fn __repr__(&self) -> String {
        format!(
            "GreedyResult(items={:?}, vector={:?}, weight={}, guarantee={})",
            self.items, self.vector, self.weight, self.guarantee
        )
    }
}

impl From<GreedyResult> for PyGreedyResult {
    fn from(r: GreedyResult) -> Self {
        PyGreedyResult {
            items: ids(&r.subset),
            vector: r.vector.0,
            weight: r.weight,
            guarantee: r.guarantee.to_string(),
        }
    }
}

#[pyfunction]
fn parse_instance(text: &str) -> PyResult<PyInstance> {
    PyInstance::parse(text)
}

/// Seeded random instance. Give exactly one of `capacity` or `ratio`
/// (`"p/q"` or a decimal string).
#[pyfunction]
#[pyo3(signature = (n, levels, weight_max, seed, capacity=None, ratio=None))]
fn generate(
    n: usize,
    levels: usize,
    weight_max: u64,
    seed: u64,
    capacity: Option<u64>,
    ratio: Option<&str>,
) -> PyResult<PyInstance> {
    let capacity = match (capacity, ratio) {
        (Some(w), None) => CapacityMode::Fixed(w),
        (None, Some(r)) => CapacityMode::Ratio(io::parse_ratio(r).map_err(to_py)?),
        _ => return Err(PyValueError::new_err("give exactly one of capacity or ratio")),
    };
    let inner = io::generate_instance(&GeneratorParams {
        n,
        levels,
        capacity,
        weight_max,
        seed,
    })
    .map_err(to_py)?;
    Ok(PyInstance { inner })
}

#[pyfunction]
#[pyo3(signature = (instance, matrix=false))]
fn solve(instance: &PyInstance, matrix: bool) -> PyResult<PyFrontier> {
    if matrix {
        let (inner, m) = dp::solve_with_matrix(&instance.inner).map_err(to_py)?;
        Ok(PyFrontier { inner, matrix: Some(m) })
    } else {
        let inner = dp::solve(&instance.inner).map_err(to_py)?;
        Ok(PyFrontier { inner, matrix: None })
    }
}

#[pyfunction]
#[pyo3(signature = (instance, force=false))]
fn enumerate_frontier(instance: &PyInstance, force: bool) -> PyResult<PyFrontier> {
    let inner = oracle::enumerate_frontier(&instance.inner, force).map_err(to_py)?;
    Ok(PyFrontier { inner, matrix: None })
}

#[pyfunction]
fn greedy_r(instance: &PyInstance) -> PyGreedyResult {
    greedy::greedy_r(&instance.inner).into()
}

#[pyfunction]
fn greedy_w(instance: &PyInstance) -> PyGreedyResult {
    greedy::greedy_w(&instance.inner).into()
}

#[pyfunction]
fn suffix_sums(g: Vec<u32>) -> Vec<u64> {
    dominance::suffix_sums(&vector(g)).sums().to_vec()
}

#[pyfunction]
fn weakly_dominates(a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
    dominance::weakly_dominates(&vector(a), &vector(b)).map_err(to_py)
}

#[pyfunction]
fn dominates(a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
    dominance::dominates(&vector(a), &vector(b)).map_err(to_py)
}

#[pyfunction]
fn equivalent(a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
    dominance::equivalent(&vector(a), &vector(b)).map_err(to_py)
}

/// One of `"dominates"`, `"dominated"`, `"equivalent"`, `"incomparable"`.
#[pyfunction]
fn compare(a: Vec<u32>, b: Vec<u32>) -> PyResult<String> {
    Ok(dominance::compare(&vector(a), &vector(b)).map_err(to_py)?.to_string())
}

fn fractions<'py>(py: Python<'py>, v: &Valuation) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    v.values()
        .iter()
        .map(|x| fraction.call1(PyTuple::new(py, [x.to_string()])?))
        .collect()
}

fn valuation(values: Vec<Bound<'_, PyAny>>) -> PyResult<Valuation> {
    let values = values
        .iter()
        .map(|x| {
            x.str()?
                .to_str()?
                .parse::<num::BigRational>()
                .map_err(|_| PyValueError::new_err(format!("not a rational: {x}")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    Valuation::new(values).map_err(to_py)
}

/// Exact value of `g` under a valuation given as ints or `Fraction`s.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, values: Vec<Bound<'py, PyAny>>, g: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    let v = valuation(values)?;
    let total = dominance::evaluate(&v, &vector(g)).map_err(to_py)?;
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((total.to_string(),))
}

/// A valuation under which `b` scores strictly higher than `a`, or `None`
/// when `a` weakly dominates `b`.
#[pyfunction]
fn falsification_witness<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    b: Vec<u32>,
    n: u64,
) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
    match dominance::falsification_witness(&vector(a), &vector(b), n).map_err(to_py)? {
        Some(v) => Ok(Some(fractions(py, &v)?)),
        None => Ok(None),
    }
}

#[pyfunction]
fn label_bound(levels: usize, i: usize) -> PyResult<u128> {
    dp::label_bound(levels, i).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "qknap")]
fn qknap_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyItem>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyLabel>()?;
    m.add_class::<PyFrontier>()?;
    m.add_class::<PyGreedyResult>()?;
    m.add_function(wrap_pyfunction!(parse_instance, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_frontier, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_r, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_w, m)?)?;
    m.add_function(wrap_pyfunction!(suffix_sums, m)?)?;
    m.add_function(wrap_pyfunction!(weakly_dominates, m)?)?;
    m.add_function(wrap_pyfunction!(dominates, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(falsification_witness, m)?)?;
    m.add_function(wrap_pyfunction!(label_bound, m)?)?;
    Ok(())
}
