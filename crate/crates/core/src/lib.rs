//! Multi-objective consensus-based optimization (M-CBO).
//!
//! A multi-objective problem `min g(x)`, `g: R^d -> R^m`, is decomposed into
//! `N` weighted-norm scalar sub-problems, one per agent. Agents interact
//! through softmax-weighted consensus points and move by an anisotropic
//! Euler-Maruyama style update until an iteration cap is reached.
//!
//! Modules:
//! - [`scalarization`]: weight simplex, the `G_p` family, weight grids.
//! - [`problems`]: benchmark suite, box domains, brute-force sub-problem oracle.
//! - [`solver`]: consensus points, plain and greedy updates, the run loop.
//! - [`metrics`]: average squared error, IGD, dominance diagnostics.
//! - [`experiment`]: config files, seeded repeated runs, CSV outputs.

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod problems;
pub mod scalarization;
pub mod solver;

pub use error::{Error, Result};
pub use metrics::{err2, igd, nondominated_fraction, MetricRecord, MetricSample, MetricTrace};
pub use problems::{
    clip_to_domain, reference_front, reference_solutions, sample_uniform, subproblem_oracle,
    BoxDomain, Problem, ProblemKind, ReferenceSolution, ReferenceSolutionSet,
};
pub use scalarization::{evaluate_gp, generate_uniform_weights, ScalarizationOrder, WeightVector};
pub use solver::{
    consensus_points, init_ensemble, rng_from_seed, run, step, step_greedy, step_plain, Ensemble,
    NoiseDraw, RunRecord, SolverConfig, UpdateMode,
};
