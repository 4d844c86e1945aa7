use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rado_core::classify;
use rado_core::experiments::{self, format_rational, parse_rational, Property, TrialConfig};
use rado_core::extremal::{self, Budget};
use rado_core::partition::realized_patterns;
use rado_core::solutions::{self, GroundSet, SolutionClass};
use rado_core::{ColumnSet, IntMatrix};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn class_of(s: &str) -> PyResult<SolutionClass> {
    s.parse().map_err(err)
}

/// Accepts a Fraction, int, float or a string like "1/2".
fn rational_of(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&v.str()?.to_cow()?).map_err(err)
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

fn budget(node_limit: Option<u64>, time_limit: Option<f64>) -> Budget {
    Budget { nodes: node_limit, time: time_limit.map(std::time::Duration::from_secs_f64) }
}

/// An integer matrix `A`, read as the homogeneous system `A x = 0`.
/// Blocks of 1-based columns and an integer witness.
type Pattern = (Vec<Vec<usize>>, Vec<BigInt>);

#[pyclass(name = "LinearSystem", frozen)]
struct PyLinearSystem {
    inner: rado_core::LinearSystem,
}

#[pymethods]
impl PyLinearSystem {
    #[new]
    #[pyo3(signature = (rows, name=None))]
    fn new(rows: Vec<Vec<BigInt>>, name: Option<String>) -> PyResult<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let matrix = IntMatrix::from_rows(cols, rows).map_err(err)?;
        let mut inner = rado_core::LinearSystem::new(matrix).map_err(err)?;
        if let Some(name) = name {
            inner = inner.with_name(name);
        }
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        rado_core::io::parse_system_str(text).map(|inner| Self { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        rado_core::io::emit_system(&self.inner)
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<BigInt>> {
        self.inner.matrix().row_vecs()
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn __repr__(&self) -> String {
        format!("LinearSystem({})", self.inner.matrix())
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = classify::classify(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("irredundant", r.irredundant)?;
        d.set_item("positive", r.positive)?;
        d.set_item("abundant", r.abundant())?;
        d.set_item("partition_regular", r.partition_regular)?;
        d.set_item("density_regular", r.density_regular)?;
        d.set_item("invariant", r.invariant)?;
        d.set_item("m1", r.m1.as_ref().map(|m| fraction(py, &m.value)).transpose()?)?;
        d.set_item("m", r.m.as_ref().map(|m| fraction(py, &m.value)).transpose()?)?;
        d.set_item("proper_solution", r.proper_witness)?;
        d.set_item("positive_solution", r.positive_witness)?;
        d.set_item(
            "column_blocks",
            r.column_condition.map(|b| b.iter().map(ColumnSet::one_based).collect::<Vec<_>>()),
        )?;
        Ok(d)
    }

    /// `(value, 1-based maximising columns)` for `m_1(A)`.
    fn m1<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
        let d = classify::max_one_density(&self.inner).map_err(err)?;
        Ok((fraction(py, &d.value)?, d.witness.one_based()))
    }

    /// `(value, 1-based maximising columns)` for `m(A)`.
    fn m<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
        let d = classify::max_density(&self.inner).map_err(err)?;
        Ok((fraction(py, &d.value)?, d.witness.one_based()))
    }

    fn r_q(&self, cols: Vec<usize>) -> PyResult<usize> {
        let q = ColumnSet::from_one_based(&cols, self.inner.cols()).map_err(err)?;
        classify::r_q(&self.inner, &q).map_err(err)
    }

    /// `A[Q]` for 1-based columns `Q`.
    fn subsystem(&self, cols: Vec<usize>) -> PyResult<Self> {
        let q = ColumnSet::from_one_based(&cols, self.inner.cols()).map_err(err)?;
        classify::subsystem(&self.inner, &q).map(|inner| Self { inner }).map_err(err)
    }

    /// `(partition, witness)` pairs; partitions use 1-based columns.
    fn patterns(&self) -> PyResult<Vec<Pattern>> {
        Ok(realized_patterns(&self.inner)
            .map_err(err)?
            .into_iter()
            .map(|p| {
                let blocks = p.partition.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
                (blocks, p.witness)
            })
            .collect())
    }

    #[pyo3(signature = (n, class_="all"))]
    fn count(&self, n: usize, class_: &str) -> PyResult<u64> {
        solutions::count_solutions(&self.inner, &GroundSet::range(n), class_of(class_)?, None).map_err(err)
    }

    /// Solutions with entries in `ground`, or in `[n]` when an int is given.
    #[pyo3(signature = (ground, class_="all", limit=None))]
    fn solutions(&self, ground: &Bound<'_, PyAny>, class_: &str, limit: Option<usize>) -> PyResult<Vec<Vec<i64>>> {
        let t = ground_set(ground)?;
        let it = solutions::enumerate_solutions(&self.inner, &t, class_of(class_)?, None).map_err(err)?;
        Ok(it.take(limit.unwrap_or(usize::MAX)).collect())
    }

    /// `(max degree, smallest attaining set)` of the proper-solution hypergraph.
    fn max_degree(&self, n: usize, ell: usize) -> PyResult<(u64, Vec<i64>)> {
        let d = solutions::max_ell_degree(&self.inner, n, ell).map_err(err)?;
        Ok((d.max_degree, d.attaining))
    }

    #[pyo3(signature = (n, node_limit=None, time_limit=None))]
    fn extremal<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        node_limit: Option<u64>,
        time_limit: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = extremal::extremal_number(&self.inner, n, budget(node_limit, time_limit)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("value", r.value)?;
        d.set_item("witness", r.witness.elements().to_vec())?;
        d.set_item("exact", r.exact)?;
        d.set_item("upper_bound", r.upper_bound)?;
        Ok(d)
    }

    #[pyo3(signature = (n, p, class_="proper"))]
    fn expected_count<'py>(&self, py: Python<'py>, n: usize, p: &Bound<'py, PyAny>, class_: &str) -> PyResult<Bound<'py, PyAny>> {
        let e = experiments::expected_count_exact(&self.inner, n, &rational_of(p)?, class_of(class_)?)
            .map_err(err)?;
        fraction(py, &e)
    }

    /// `(expectation, variance)` of the number of proper solutions in `[n]_p`.
    fn moments<'py>(&self, py: Python<'py>, n: usize, p: &Bound<'py, PyAny>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let r = experiments::variance_exact(&self.inner, n, &rational_of(p)?).map_err(err)?;
        Ok((fraction(py, &r.expectation)?, fraction(py, &r.variance)?))
    }
}

fn ground_set(v: &Bound<'_, PyAny>) -> PyResult<GroundSet> {
    if let Ok(n) = v.extract::<usize>() {
        return Ok(GroundSet::range(n));
    }
    GroundSet::from_unsorted(v.extract::<Vec<i64>>()?).map_err(err)
}

/// `[n]_p` for one trial of a seeded experiment.
#[pyfunction]
fn sample_set(n: usize, p: f64, seed: u64, trial: u64) -> Vec<i64> {
    experiments::sample_set(n, p, seed, trial).elements().to_vec()
}

/// `True`, `False`, or `None` when the budget ran out.
#[pyfunction]
#[pyo3(signature = (system, ground, eps, class_="proper", node_limit=None))]
fn arrow_epsilon(
    system: &PyLinearSystem,
    ground: &Bound<'_, PyAny>,
    eps: &Bound<'_, PyAny>,
    class_: &str,
    node_limit: Option<u64>,
) -> PyResult<Option<bool>> {
    let v = experiments::arrow_epsilon(&system.inner, &ground_set(ground)?, &rational_of(eps)?, class_of(class_)?, budget(node_limit, None))
        .map_err(err)?;
    Ok(v.decision.as_bool())
}

/// `True`, `False`, or `None` when the budget ran out.
#[pyfunction]
#[pyo3(signature = (system, ground, s, class_="proper", node_limit=None))]
fn arrow_s(
    system: &PyLinearSystem,
    ground: &Bound<'_, PyAny>,
    s: usize,
    class_: &str,
    node_limit: Option<u64>,
) -> PyResult<Option<bool>> {
    let v = experiments::arrow_s(&system.inner, &ground_set(ground)?, s, class_of(class_)?, budget(node_limit, None))
        .map_err(err)?;
    Ok(v.decision.as_bool())
}

#[pyfunction]
#[pyo3(signature = (system, n, p, trials, seed, property="contains", class_="proper", node_limit=None))]
#[allow(clippy::too_many_arguments)]
fn estimate<'py>(
    py: Python<'py>,
    system: &PyLinearSystem,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    property: &str,
    class_: &str,
    node_limit: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = TrialConfig {
        n,
        p,
        trials,
        seed,
        class: class_of(class_)?,
        property: property.parse::<Property>().map_err(err)?,
        budget: budget(node_limit, None),
    };
    let row = experiments::estimate_probability(&system.inner, &config).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("successes", row.successes)?;
    d.set_item("trials", row.trials)?;
    d.set_item("indeterminate", row.indeterminate)?;
    d.set_item("estimate", row.estimate)?;
    d.set_item("ci", (row.ci_low, row.ci_high))?;
    Ok(d)
}

#[pyfunction]
fn load_system(path: &str) -> PyResult<PyLinearSystem> {
    rado_core::io::parse_system(path).map(|inner| PyLinearSystem { inner }).map_err(err)
}

/// `((1 - eps) / 4)^(1/(m - 1))`.
#[pyfunction]
fn reference_c(eps: f64, m: usize) -> f64 {
    experiments::reference_small_c(eps, m)
}

#[pyfunction]
fn rational_str(value: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(format_rational(&rational_of(value)?))
}

#[pymodule]
fn rado(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLinearSystem>()?;
    m.add_function(wrap_pyfunction!(sample_set, m)?)?;
    m.add_function(wrap_pyfunction!(arrow_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(arrow_s, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(load_system, m)?)?;
    m.add_function(wrap_pyfunction!(reference_c, m)?)?;
    m.add_function(wrap_pyfunction!(rational_str, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
