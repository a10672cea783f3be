//! Python bindings: `import lrp`.

use lrp_core::ballgrowth::{init_ball, run_chain, Driver, StopRule};
use lrp_core::estimators::{self, EdgeSource, TwoBallConfig};
use lrp_core::experiment::{self, ExperimentConfig};
use lrp_core::{graph, io, weights, Error, Mode};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Format(_) => PyValueError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "quenched" => Ok(Mode::Quenched),
        "annealed" => Ok(Mode::Annealed),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'quenched' or 'annealed', got {other:?}"
        ))),
    }
}

/// The box {0, ..., N}^d.
#[pyclass(name = "Box", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBox(lrp_core::BoxSpec);

#[pymethods]
impl PyBox {
    #[new]
    fn new(dim: usize, side: u64) -> PyResult<Self> {
        lrp_core::BoxSpec::new(dim, side).map(PyBox).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn side(&self) -> u64 {
        self.0.side()
    }

    #[getter]
    fn site_count(&self) -> u64 {
        self.0.site_count()
    }

    fn index(&self, coords: Vec<u64>) -> PyResult<u64> {
        self.0.site_index(&coords).map_err(err)
    }

    fn coords(&self, index: u64) -> PyResult<Vec<u64>> {
        self.0
            .site_from_index(index)
            .map(|s| s.coords().to_vec())
            .map_err(err)
    }

    fn center(&self) -> u64 {
        self.0.center().index()
    }

    fn distance(&self, a: u64, b: u64) -> PyResult<u64> {
        self.0.site_from_index(a).map_err(err)?;
        self.0.site_from_index(b).map_err(err)?;
        Ok(self.0.l1_between(a, b))
    }

    fn l1_ball(&self, x: u64, radius: u64) -> PyResult<Vec<u64>> {
        let x = self.0.site_from_index(x).map_err(err)?;
        self.0.l1_ball(&x, radius).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Box(dim={}, side={})", self.0.dim(), self.0.side())
    }
}

/// Connection parameters β and s; s defaults to the dimension.
#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyParams(lrp_core::ModelParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (beta, dim, exponent=None))]
    fn new(beta: f64, dim: usize, exponent: Option<f64>) -> PyResult<Self> {
        match exponent {
            Some(s) => lrp_core::ModelParams::with_exponent(beta, s, dim),
            None => lrp_core::ModelParams::critical(beta, dim),
        }
        .map(PyParams)
        .map_err(err)
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn exponent(&self) -> f64 {
        self.0.exponent()
    }

    /// Connection probability at ℓ1 distance `r ≥ 1`.
    fn probability(&self, r: u64) -> PyResult<f64> {
        if r == 0 {
            return Err(PyValueError::new_err("distance must be at least 1"));
        }
        Ok(self.0.probability_at(r))
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(beta={}, exponent={})",
            self.0.beta(),
            self.0.exponent()
        )
    }
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph(lrp_core::Graph);

#[pymethods]
impl PyGraph {
    #[getter]
    fn box_spec(&self) -> PyBox {
        PyBox(self.0.box_spec().clone())
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed()
    }

    #[getter]
    fn generator_id(&self) -> String {
        self.0.generator_id().to_string()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    #[getter]
    fn mean_degree(&self) -> f64 {
        self.0.mean_degree()
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.0.edges().to_vec()
    }

    fn neighbors(&self, x: u64) -> PyResult<Vec<u64>> {
        self.0.box_spec().site_from_index(x).map_err(err)?;
        Ok(self.0.neighbors(x).to_vec())
    }

    fn has_edge(&self, a: u64, b: u64) -> bool {
        self.0.has_edge(a, b)
    }

    /// Graph distances from `source`; unreachable sites are `None`.
    fn distances(&self, source: u64) -> PyResult<Vec<Option<u32>>> {
        let s = self.0.box_spec().site_from_index(source).map_err(err)?;
        let field = estimators::bfs_distances(&self.0, &s).map_err(err)?;
        Ok(field
            .dist()
            .iter()
            .map(|&d| (d != estimators::UNREACHED).then_some(d))
            .collect())
    }

    #[pyo3(signature = (source_budget=50_000))]
    fn diameter(&self, source_budget: u64) -> PyResult<u32> {
        estimators::diameter_exact(&self.0, source_budget).map_err(err)
    }

    /// Lower bound on the diameter from `k` sampled sources.
    fn diameter_sampled(&self, k: u64, seed: u64) -> PyResult<u32> {
        estimators::diameter_sampled(&self.0, k, seed).map_err(err)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &io::encode_graph(&self.0))
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        io::decode_graph(data).map(PyGraph).map_err(err)
    }

    fn __repr__(&self) -> String {
        let b = self.0.box_spec();
        format!(
            "Graph(dim={}, side={}, edges={}, seed={})",
            b.dim(),
            b.side(),
            self.0.edge_count(),
            self.0.seed()
        )
    }
}

#[pyfunction]
fn sample_graph(b: &PyBox, params: &PyParams, seed: u64) -> PyGraph {
    PyGraph(graph::sample_graph_eager(&b.0, &params.0, seed))
}

#[pyfunction]
#[pyo3(signature = (b, params, seed, pair_budget=10_000_000))]
fn sample_graph_naive(
    b: &PyBox,
    params: &PyParams,
    seed: u64,
    pair_budget: u64,
) -> PyResult<PyGraph> {
    graph::sample_graph_naive(&b.0, &params.0, seed, pair_budget)
        .map(PyGraph)
        .map_err(err)
}

/// Exact mean and variance of the edge count.
#[pyfunction]
fn edge_count_moments(b: &PyBox, params: &PyParams) -> (f64, f64) {
    graph::edge_count_moments(&b.0, &params.0)
}

/// ρ(y, S) = Σ_{x ∈ S, x ≠ y} β / ‖x − y‖₁^s.
#[pyfunction]
fn rho(b: &PyBox, params: &PyParams, y: u64, set: Vec<u64>) -> PyResult<f64> {
    let y = b.0.site_from_index(y).map_err(err)?;
    weights::rho(&params.0, &b.0, &y, &set).map_err(err)
}

/// Exact E[|∂B_1|] for the chain started from `start`.
#[pyfunction]
fn expected_first_boundary(b: &PyBox, params: &PyParams, start: Vec<u64>) -> PyResult<f64> {
    let state = init_ball(&b.0, &start).map_err(err)?;
    Ok(weights::expected_boundary_growth(&params.0, &b.0, &state))
}

/// Boundary sizes `[|∂B_0|, |∂B_1|, ...]` of one chain.
#[pyfunction]
#[pyo3(signature = (b, params, start, mode="annealed", seed=0, max_steps=None, graph=None))]
fn ball_growth(
    b: &PyBox,
    params: &PyParams,
    start: Vec<u64>,
    mode: &str,
    seed: u64,
    max_steps: Option<usize>,
    graph: Option<&PyGraph>,
) -> PyResult<Vec<u64>> {
    let state = init_ball(&b.0, &start).map_err(err)?;
    let stop = StopRule {
        max_steps,
        size_threshold: None,
    };
    let sampled;
    let mut driver = match parse_mode(mode)? {
        Mode::Annealed => Driver::annealed(&b.0, &params.0, seed),
        Mode::Quenched => Driver::quenched(match graph {
            Some(g) => &g.0,
            None => {
                sampled = graph::sample_graph_eager(&b.0, &params.0, seed);
                &sampled
            }
        }),
    };
    run_chain(state, &mut driver, stop)
        .map(|t| t.boundary_sizes)
        .map_err(err)
}

/// One two-ball run between sites `x` and `y`; returns the outcome as a dict.
#[pyfunction]
#[pyo3(signature = (b, params, x, y, radius, eps=0.4, seed=0, graph=None, max_steps=None))]
#[allow(clippy::too_many_arguments)]
fn two_ball<'py>(
    py: Python<'py>,
    b: &PyBox,
    params: &PyParams,
    x: u64,
    y: u64,
    radius: u64,
    eps: f64,
    seed: u64,
    graph: Option<&PyGraph>,
    max_steps: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let xs = b.0.site_from_index(x).map_err(err)?;
    let ys = b.0.site_from_index(y).map_err(err)?;
    let config = TwoBallConfig {
        radius,
        eps,
        max_steps: max_steps.unwrap_or(2 * b.0.max_l1() as usize + 4),
    };
    let source = match graph {
        Some(g) => EdgeSource::Quenched(&g.0),
        None => EdgeSource::Annealed { seed },
    };
    let out = estimators::two_ball_tau(&b.0, &params.0, &xs, &ys, &config, source).map_err(err)?;
    to_py(py, &out)
}

#[pyfunction]
fn scaling_statistic(diameter: u64, n: u64) -> PyResult<f64> {
    estimators::scaling_statistic(diameter, n).map_err(err)
}

fn config_from(json: Option<&str>) -> PyResult<ExperimentConfig> {
    let config: ExperimentConfig = match json {
        Some(s) => serde_json::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => ExperimentConfig::default(),
    };
    config.validate().map_err(err)?;
    Ok(config)
}

/// Runs a CLI experiment from a JSON config and returns its records.
/// `kind` is one of ball-growth, diameter, two-ball, scaling, verify-lemmas.
#[pyfunction]
#[pyo3(signature = (kind, config=None))]
fn run_experiment<'py>(
    py: Python<'py>,
    kind: &str,
    config: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = config_from(config)?;
    match kind {
        "ball-growth" => to_py(
            py,
            &py.detach(|| experiment::run_ball_growth(&c)).map_err(err)?,
        ),
        "diameter" => to_py(
            py,
            &py.detach(|| experiment::run_diameter(&c)).map_err(err)?,
        ),
        "two-ball" => to_py(
            py,
            &py.detach(|| experiment::run_two_ball(&c)).map_err(err)?,
        ),
        "scaling" => to_py(
            py,
            &py.detach(|| experiment::run_scaling(&c)).map_err(err)?.0,
        ),
        "verify-lemmas" => to_py(
            py,
            &py.detach(|| experiment::verify_lemmas(&c)).map_err(err)?,
        ),
        other => Err(PyValueError::new_err(format!(
            "unknown experiment {other:?}"
        ))),
    }
}

#[pymodule]
fn lrp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyBox>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(sample_graph, m)?)?;
    m.add_function(wrap_pyfunction!(sample_graph_naive, m)?)?;
    m.add_function(wrap_pyfunction!(edge_count_moments, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(expected_first_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(ball_growth, m)?)?;
    m.add_function(wrap_pyfunction!(two_ball, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
