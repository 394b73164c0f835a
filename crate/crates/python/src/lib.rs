//! Python bindings for `mcbo`.
//!
//! Build with `--features extension-module` to produce an importable
//! `mcbo_py` extension. Scalarization orders are passed as floats, with
//! `math.inf` selecting the Chebyshev form.

use mcbo::experiment::{parse_config, run_experiment as run_experiment_rs, write_outputs};
use mcbo::problems::{ReferenceSolution, ReferenceSolutionSet};
use mcbo::scalarization::{ScalarizationOrder, WeightVector};
use mcbo::solver::{Ensemble, SolverConfig, UpdateMode};
use mcbo::MetricSample;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: mcbo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn order(p: f64) -> PyResult<ScalarizationOrder> {
    ScalarizationOrder::from_f64(p).map_err(py_err)
}

fn weight_vectors(weights: Vec<Vec<f64>>) -> PyResult<Vec<WeightVector>> {
    weights
        .into_iter()
        .map(|w| WeightVector::new(w).map_err(py_err))
        .collect()
}

/// A benchmark problem with a box domain and two objectives.
#[pyclass(module = "mcbo_py", frozen)]
pub struct Problem {
    inner: mcbo::Problem,
}

#[pymethods]
impl Problem {
    #[new]
    #[pyo3(signature = (name, dim = None))]
    fn new(name: &str, dim: Option<usize>) -> PyResult<Self> {
        let inner = mcbo::Problem::by_name(name, dim).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn n_objectives(&self) -> usize {
        self.inner.n_objectives()
    }

    /// `(lower, upper)` bounds of the search box.
    #[getter]
    fn domain(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.inner.domain();
        (d.lower().to_vec(), d.upper().to_vec())
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.eval_objectives(&x).map_err(py_err)
    }

    fn clip(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        mcbo::clip_to_domain(self.inner.domain(), &x).map_err(py_err)
    }

    /// `count` points on the analytic Pareto front.
    fn front(&self, count: usize) -> PyResult<Vec<Vec<f64>>> {
        mcbo::reference_front(&self.inner, count, None).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Problem('{}', dim={})", self.inner.name(), self.inner.dim())
    }
}

/// Final state of a solver run.
#[pyclass(module = "mcbo_py", frozen, get_all)]
pub struct RunResult {
    positions: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
    seed: u64,
}

#[pymethods]
impl RunResult {
    fn __repr__(&self) -> String {
        format!("RunResult(n_agents={}, seed={})", self.positions.len(), self.seed)
    }
}

#[pyfunction]
#[pyo3(signature = (values, weights, p = f64::INFINITY))]
fn evaluate_gp(values: Vec<f64>, weights: Vec<f64>, p: f64) -> PyResult<f64> {
    let w = WeightVector::new(weights).map_err(py_err)?;
    mcbo::evaluate_gp(&values, &w, order(p)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, m = 2))]
fn uniform_weights(n: usize, m: usize) -> PyResult<Vec<Vec<f64>>> {
    let ws = mcbo::generate_uniform_weights(n, m).map_err(py_err)?;
    Ok(ws.into_iter().map(WeightVector::into_inner).collect())
}

#[pyfunction]
#[pyo3(signature = (problem, weights, p = f64::INFINITY, budget = 10_000))]
fn subproblem_oracle(problem: &Problem, weights: Vec<f64>, p: f64, budget: usize) -> PyResult<Vec<f64>> {
    let w = WeightVector::new(weights).map_err(py_err)?;
    mcbo::subproblem_oracle(&problem.inner, &w, order(p)?, budget).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (problem, positions, weights, alpha = 1e5, p = f64::INFINITY))]
fn consensus_points(
    problem: &Problem,
    positions: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
    alpha: f64,
    p: f64,
) -> PyResult<Vec<Vec<f64>>> {
    let e = Ensemble::from_positions(&problem.inner, positions, weight_vectors(weights)?).map_err(py_err)?;
    mcbo::consensus_points(&e, alpha, order(p)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (
    problem, n_agents, k_max, seed, *,
    lambda_ = 1.0, sigma = 4.0, dt = 0.01, alpha = 1e5, p = f64::INFINITY, mode = "plain",
))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    problem: &Problem,
    n_agents: usize,
    k_max: usize,
    seed: u64,
    lambda_: f64,
    sigma: f64,
    dt: f64,
    alpha: f64,
    p: f64,
    mode: &str,
) -> PyResult<RunResult> {
    let config = SolverConfig {
        lambda: lambda_,
        sigma,
        dt,
        alpha,
        p: order(p)?,
        mode: mode.parse::<UpdateMode>().map_err(py_err)?,
        ..SolverConfig::new(n_agents, k_max, seed)
    };
    let weights = mcbo::generate_uniform_weights(n_agents, problem.inner.n_objectives()).map_err(py_err)?;
    let record = py
        .detach(|| {
            let mut rng = mcbo::rng_from_seed(seed);
            mcbo::run(&problem.inner, &config, weights, &mut rng, |_| Ok(MetricSample::default()))
        })
        .map_err(py_err)?;
    Ok(RunResult {
        positions: record.positions,
        images: record.images,
        weights: record.weights.into_iter().map(WeightVector::into_inner).collect(),
        seed,
    })
}

#[pyfunction]
fn igd(images: Vec<Vec<f64>>, front: Vec<Vec<f64>>) -> PyResult<f64> {
    mcbo::igd(&images, &front).map_err(py_err)
}

/// Mean squared distance between `positions` and oracle `references`,
/// aligned by index with `weights`.
#[pyfunction]
fn err2(
    problem: &Problem,
    positions: Vec<Vec<f64>>,
    references: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
) -> PyResult<f64> {
    let entries = weight_vectors(weights)?
        .into_iter()
        .zip(references)
        .map(|(weight, position)| {
            let image = problem.inner.eval_objectives(&position)?;
            Ok(ReferenceSolution {
                weight,
                position,
                image,
            })
        })
        .collect::<mcbo::Result<Vec<_>>>()
        .map_err(py_err)?;
    let set = ReferenceSolutionSet::new(&problem.inner, entries).map_err(py_err)?;
    mcbo::err2(&positions, &set).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (images, tolerance = 1e-8))]
fn nondominated_fraction(images: Vec<Vec<f64>>, tolerance: f64) -> f64 {
    mcbo::nondominated_fraction(&images, tolerance)
}

type SummaryRow = (usize, Option<f64>, Option<f64>);

/// Runs the experiment described by `config` (config-file text) and returns
/// the per-iteration means as `(iter, err2, igd)` tuples. With `write=True`
/// the output files are written to the configured directory.
#[pyfunction]
#[pyo3(signature = (config, write = false))]
fn run_experiment(py: Python<'_>, config: &str, write: bool) -> PyResult<Vec<SummaryRow>> {
    let cfg = parse_config(config).map_err(py_err)?;
    let outcome = py
        .detach(|| {
            let out = run_experiment_rs(&cfg)?;
            if write {
                write_outputs(&out.records, &out.summary, &cfg, &cfg.out_dir)?;
            }
            Ok(out)
        })
        .map_err(py_err)?;
    Ok(outcome
        .summary
        .rows
        .into_iter()
        .map(|r| (r.iteration, r.err2, r.igd))
        .collect())
}

#[pymodule]
pub fn mcbo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(evaluate_gp, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_weights, m)?)?;
    m.add_function(wrap_pyfunction!(subproblem_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(consensus_points, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(igd, m)?)?;
    m.add_function(wrap_pyfunction!(err2, m)?)?;
    m.add_function(wrap_pyfunction!(nondominated_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
