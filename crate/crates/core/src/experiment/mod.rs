//! Repeated seeded runs, aggregation and file outputs.

mod config;
mod output;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{MetricObserver, MetricRecord};
use crate::problems::{reference_front, reference_solutions, Problem, ReferenceSolutionSet};
use crate::scalarization::generate_uniform_weights;
use crate::solver::{rng_from_seed, run, RunRecord, SolverConfig};

pub use config::{parse_config, ExperimentConfig, MetricSelection};
pub use output::{
    format_float, write_outputs, write_reference_set, FINAL_POSITIONS_FILE, MANIFEST_FILE,
    SUMMARY_FILE, TRACE_FILE,
};

/// Odd constant mixed into the master seed per run (the 64-bit golden ratio).
pub const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of run `r`: `master XOR (r * SEED_MIX)`. Run 0 uses the master seed.
pub fn run_seed(master: u64, run: usize) -> u64 {
    master ^ (run as u64).wrapping_mul(SEED_MIX)
}

/// Per-iteration arithmetic mean of each metric over all runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSummary {
    pub rows: Vec<MetricRecord>,
}

impl AggregateSummary {
    pub fn from_records(records: &[RunRecord]) -> Result<Self> {
        let first = records.first().ok_or(Error::Empty("no runs to aggregate"))?;
        let len = first.trace.len();
        if let Some(bad) = records.iter().find(|r| r.trace.len() != len) {
            return Err(Error::LengthMismatch {
                left: bad.trace.len(),
                right: len,
            });
        }
        let n = records.len() as f64;
        let mean = |k: usize, pick: fn(&MetricRecord) -> Option<f64>| -> Option<f64> {
            let mut total = 0.0;
            for r in records {
                total += pick(&r.trace.records()[k])?;
            }
            Some(total / n)
        };
        let rows = (0..len)
            .map(|k| MetricRecord {
                iteration: first.trace.records()[k].iteration,
                err2: mean(k, |r| r.err2),
                igd: mean(k, |r| r.igd),
            })
            .collect();
        Ok(Self { rows })
    }
}

/// Ground truth shared by all runs of an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentReferences {
    /// Oracle solutions aligned with the agent weights, when err2 is requested.
    pub solutions: Option<ReferenceSolutionSet>,
    /// Reference front, when IGD is requested.
    pub front: Option<Vec<Vec<f64>>>,
}

impl ExperimentReferences {
    pub fn build(config: &ExperimentConfig, problem: &Problem) -> Result<Self> {
        let s = &config.solver;
        let parallel = config.parallel_runs || s.parallel;
        let solutions = if config.metrics.err2 {
            let weights = generate_uniform_weights(s.n_agents, problem.n_objectives())?;
            Some(reference_solutions(problem, &weights, s.p, config.oracle_budget, parallel)?)
        } else {
            None
        };
        let front = if config.metrics.igd {
            if problem.has_analytic_front() {
                Some(reference_front(problem, config.front_points, None)?)
            } else {
                let weights = generate_uniform_weights(config.reference_points, problem.n_objectives())?;
                let set = reference_solutions(problem, &weights, s.p, config.oracle_budget, parallel)?;
                Some(reference_front(problem, config.reference_points, Some(&set))?)
            }
        } else {
            None
        };
        Ok(Self { solutions, front })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub summary: AggregateSummary,
}

/// Runs `config.runs` independent seeded runs and aggregates their traces.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let problem = config.problem()?;
    let references = ExperimentReferences::build(config, &problem)?;
    run_experiment_with(config, &problem, &references)
}

/// [`run_experiment`] with precomputed references.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    problem: &Problem,
    references: &ExperimentReferences,
) -> Result<ExperimentOutcome> {
    config.solver.validate()?;
    if config.runs == 0 {
        return Err(Error::InvalidConfig("runs must be >= 1".into()));
    }
    let observer = MetricObserver::new(references.solutions.clone(), references.front.clone());
    let weights = generate_uniform_weights(config.solver.n_agents, problem.n_objectives())?;

    let one = |r: usize| -> Result<RunRecord> {
        let seed = run_seed(config.solver.seed, r);
        let solver = SolverConfig {
            seed,
            ..config.solver.clone()
        };
        let mut rng = rng_from_seed(seed);
        let mut record = run(problem, &solver, weights.clone(), &mut rng, |e| observer.observe(e))
            .map_err(|e| Error::Run {
                run: r,
                source: Box::new(e),
            })?;
        record.run = r;
        Ok(record)
    };
    let records = if config.parallel_runs {
        (0..config.runs).into_par_iter().map(one).collect::<Result<Vec<_>>>()?
    } else {
        (0..config.runs).map(one).collect::<Result<Vec<_>>>()?
    };
    let summary = AggregateSummary::from_records(&records)?;
    Ok(ExperimentOutcome { records, summary })
}
