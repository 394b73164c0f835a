//! Consensus-based multi-objective dynamics.
//!
//! Agent `i` is bound to the sub-problem with weight `w^i`. Each iteration
//! every agent moves towards its consensus point
//!
//! ```text
//! x_a(w^i) = sum_j X^j exp(-a G_p(g(X^j), w^i)) / Z
//! ```
//!
//! with anisotropic noise scaled coordinate-wise by the distance to it:
//!
//! ```text
//! X^i_{k+1,l} = X^i_{k,l} + lambda dt (x_a - X^i_k)_l + sigma sqrt(dt) (x_a - X^i_k)_l B^{i,l}_k
//! ```
//!
//! followed by clipping to the search box. The greedy variant keeps the move
//! only if it strictly lowers the agent's own scalarized value.
//!
//! Randomness: a run owns one [`ChaCha8Rng`] stream. Initial positions are
//! drawn first (agent-major, coordinate-minor), then each step draws its full
//! `N x d` block of standard normals in the same order before any agent
//! moves. Parallel and serial execution therefore consume identical noise.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{MetricSample, MetricTrace};
use crate::problems::{sample_uniform, Problem};
use crate::scalarization::{gp_unchecked, ScalarizationOrder, WeightVector};

/// The random stream used for a run.
pub type RunRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    #[default]
    Plain,
    Greedy,
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plain => "plain",
            Self::Greedy => "greedy",
        })
    }
}

impl FromStr for UpdateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Self::Plain),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::InvalidConfig(format!(
                "mode must be `plain` or `greedy`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Drift strength.
    pub lambda: f64,
    /// Noise strength.
    pub sigma: f64,
    /// Step size.
    pub dt: f64,
    /// Laplace sharpness of the consensus weights.
    pub alpha: f64,
    pub p: ScalarizationOrder,
    pub n_agents: usize,
    /// Number of iterations (the only stopping rule).
    pub k_max: usize,
    pub mode: UpdateMode,
    pub seed: u64,
    /// Compute consensus points and agent updates on the rayon pool.
    /// Results are bit-identical to the serial path.
    pub parallel: bool,
}

impl SolverConfig {
    /// Defaults: `lambda = 1`, `sigma = 4`, `dt = 0.01`, `alpha = 1e5`,
    /// `p = inf`, plain updates, serial execution.
    pub fn new(n_agents: usize, k_max: usize, seed: u64) -> Self {
        Self {
            lambda: 1.0,
            sigma: 4.0,
            dt: 0.01,
            alpha: 1e5,
            p: ScalarizationOrder::Infinity,
            n_agents,
            k_max,
            mode: UpdateMode::Plain,
            seed,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda must be > 0, got {}", self.lambda));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return bad(format!("sigma must be >= 0, got {}", self.sigma));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be > 0, got {}", self.dt));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be > 0, got {}", self.alpha));
        }
        if self.lambda * self.dt > 1.0 {
            return bad(format!(
                "lambda * dt must be <= 1, got {} * {}",
                self.lambda, self.dt
            ));
        }
        if self.n_agents < 2 {
            return bad(format!("n_agents must be >= 2, got {}", self.n_agents));
        }
        if self.k_max < 1 {
            return bad("k_max must be >= 1".to_string());
        }
        if let ScalarizationOrder::Finite(p) = self.p {
            if p.is_nan() || p < 1.0 {
                return Err(Error::InvalidOrder(p));
            }
        }
        Ok(())
    }
}

/// Agent positions paired with their weights, plus cached objective images.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    positions: Vec<Vec<f64>>,
    weights: Vec<WeightVector>,
    objectives: Vec<Vec<f64>>,
    iteration: usize,
}

impl Ensemble {
    /// Builds an iteration-0 ensemble from explicit positions, which must lie
    /// in the problem's domain.
    pub fn from_positions(
        problem: &Problem,
        positions: Vec<Vec<f64>>,
        weights: Vec<WeightVector>,
    ) -> Result<Self> {
        if positions.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: positions.len(),
                right: weights.len(),
            });
        }
        if positions.is_empty() {
            return Err(Error::Empty("ensemble without agents"));
        }
        for w in &weights {
            if w.len() != problem.n_objectives() {
                return Err(Error::DimensionMismatch {
                    expected: problem.n_objectives(),
                    got: w.len(),
                });
            }
        }
        let objectives = positions
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if !problem.domain().contains(x) {
                    return Err(Error::InvalidDomain(format!(
                        "agent {i} lies outside the search box"
                    )));
                }
                problem.eval_objectives(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            positions,
            weights,
            objectives,
            iteration: 0,
        })
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    /// `g(X^i)` for every agent, always in sync with [`Ensemble::positions`].
    pub fn objectives(&self) -> &[Vec<f64>] {
        &self.objectives
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.positions[0].len()
    }

    /// `G_p(g(X^i), w^i)` for every agent.
    pub fn own_values(&self, p: ScalarizationOrder) -> Vec<f64> {
        self.objectives
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| gp_unchecked(g, w.as_slice(), p))
            .collect()
    }
}

/// Standard normal samples `B^{i,l}` for one step, stored agent-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDraw {
    values: Vec<f64>,
    n_agents: usize,
    dim: usize,
}

impl NoiseDraw {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n_agents: usize, dim: usize) -> Self {
        let values = (0..n_agents * dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        Self {
            values,
            n_agents,
            dim,
        }
    }

    pub fn from_values(n_agents: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_agents * dim {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: n_agents * dim,
            });
        }
        if let Some(l) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(l));
        }
        Ok(Self {
            values,
            n_agents,
            dim,
        })
    }

    pub fn zeros(n_agents: usize, dim: usize) -> Self {
        Self {
            values: vec![0.0; n_agents * dim],
            n_agents,
            dim,
        }
    }

    pub fn agent(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_agents, self.dim)
    }
}

/// Draws `X^i_0` uniformly from the problem's box.
pub fn init_ensemble<R: Rng + ?Sized>(
    problem: &Problem,
    config: &SolverConfig,
    weights: Vec<WeightVector>,
    rng: &mut R,
) -> Result<Ensemble> {
    if weights.len() != config.n_agents {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: config.n_agents,
        });
    }
    let positions = sample_uniform(problem.domain(), config.n_agents, rng);
    Ensemble::from_positions(problem, positions, weights)
}

/// Consensus point of every sub-problem, computed serially.
pub fn consensus_points(
    ensemble: &Ensemble,
    alpha: f64,
    p: ScalarizationOrder,
) -> Result<Vec<Vec<f64>>> {
    consensus_points_with(ensemble, alpha, p, false)
}

/// Consensus point of every sub-problem over the same frozen snapshot.
pub fn consensus_points_with(
    ensemble: &Ensemble,
    alpha: f64,
    p: ScalarizationOrder,
    parallel: bool,
) -> Result<Vec<Vec<f64>>> {
    if parallel {
        (0..ensemble.len())
            .into_par_iter()
            .map(|i| consensus_for(ensemble, i, alpha, p))
            .collect()
    } else {
        (0..ensemble.len())
            .map(|i| consensus_for(ensemble, i, alpha, p))
            .collect()
    }
}

/// Normalized combination coefficients `exp(-a G_j) / Z` for sub-problem `i`.
pub fn consensus_coefficients(
    ensemble: &Ensemble,
    i: usize,
    alpha: f64,
    p: ScalarizationOrder,
) -> Result<Vec<f64>> {
    let (mut coeffs, total) = shifted_coefficients(ensemble, i, alpha, p)?;
    coeffs.iter_mut().for_each(|c| *c /= total);
    Ok(coeffs)
}

/// Unnormalized coefficients `exp(-a (G_j - min G))` and their sum. The
/// minimizing agent gets exactly 1, so the sum is at least 1 and the
/// exponentials cannot all underflow.
fn shifted_coefficients(
    ensemble: &Ensemble,
    i: usize,
    alpha: f64,
    p: ScalarizationOrder,
) -> Result<(Vec<f64>, f64)> {
    let w = ensemble.weights[i].as_slice();
    let mut values = Vec::with_capacity(ensemble.len());
    for (j, g) in ensemble.objectives.iter().enumerate() {
        let v = gp_unchecked(g, w, p);
        if !v.is_finite() {
            return Err(Error::NonFiniteScalarization { agent: j });
        }
        values.push(v);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for v in values.iter_mut() {
        *v = (-alpha * (*v - min)).exp();
        total += *v;
    }
    Ok((values, total))
}

fn consensus_for(ensemble: &Ensemble, i: usize, alpha: f64, p: ScalarizationOrder) -> Result<Vec<f64>> {
    let (coeffs, total) = shifted_coefficients(ensemble, i, alpha, p)?;
    let mut point = vec![0.0; ensemble.dim()];
    for (c, x) in coeffs.iter().zip(&ensemble.positions) {
        if *c == 0.0 {
            continue;
        }
        for (acc, v) in point.iter_mut().zip(x) {
            *acc += c * v;
        }
    }
    point.iter_mut().for_each(|v| *v /= total);
    Ok(point)
}

/// Pre-clipping proposal for agent `i`.
fn propose(x: &[f64], consensus: &[f64], noise: &[f64], config: &SolverConfig) -> Vec<f64> {
    let drift = config.lambda * config.dt;
    let diffusion = config.sigma * config.dt.sqrt();
    x.iter()
        .zip(consensus)
        .zip(noise)
        .map(|((&xl, &cl), &b)| {
            let diff = cl - xl;
            xl + drift * diff + diffusion * diff * b
        })
        .collect()
}

fn check_step_inputs(ensemble: &Ensemble, problem: &Problem, noise: &NoiseDraw) -> Result<()> {
    if ensemble.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            got: ensemble.dim(),
        });
    }
    if noise.shape() != (ensemble.len(), ensemble.dim()) {
        return Err(Error::LengthMismatch {
            left: noise.values.len(),
            right: ensemble.len() * ensemble.dim(),
        });
    }
    Ok(())
}

/// One plain update with a fresh noise draw from `rng`.
pub fn step_plain<R: Rng + ?Sized>(
    ensemble: &Ensemble,
    problem: &Problem,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<Ensemble> {
    let noise = NoiseDraw::sample(rng, ensemble.len(), ensemble.dim());
    step_plain_with_noise(ensemble, problem, config, &noise)
}

/// One plain update with the given noise.
pub fn step_plain_with_noise(
    ensemble: &Ensemble,
    problem: &Problem,
    config: &SolverConfig,
    noise: &NoiseDraw,
) -> Result<Ensemble> {
    check_step_inputs(ensemble, problem, noise)?;
    let consensus = consensus_points_with(ensemble, config.alpha, config.p, config.parallel)?;
    let update = |i: usize| -> (Vec<f64>, Vec<f64>) {
        let mut y = propose(&ensemble.positions[i], &consensus[i], noise.agent(i), config);
        problem.domain().clip_in_place(&mut y);
        let mut g = vec![0.0; problem.n_objectives()];
        problem.eval_into(&y, &mut g);
        (y, g)
    };
    let moved: Vec<(Vec<f64>, Vec<f64>)> = if config.parallel {
        (0..ensemble.len()).into_par_iter().map(update).collect()
    } else {
        (0..ensemble.len()).map(update).collect()
    };
    let (positions, objectives) = moved.into_iter().unzip();
    Ok(Ensemble {
        positions,
        weights: ensemble.weights.clone(),
        objectives,
        iteration: ensemble.iteration + 1,
    })
}

/// One greedy update with a fresh noise draw from `rng`.
pub fn step_greedy<R: Rng + ?Sized>(
    ensemble: &Ensemble,
    problem: &Problem,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<Ensemble> {
    let noise = NoiseDraw::sample(rng, ensemble.len(), ensemble.dim());
    step_greedy_with_noise(ensemble, problem, config, &noise)
}

/// One greedy update with the given noise. The candidate is clipped first and
/// accepted only if `G_p(g(Y), w^i) < G_p(g(X^i), w^i)` strictly.
pub fn step_greedy_with_noise(
    ensemble: &Ensemble,
    problem: &Problem,
    config: &SolverConfig,
    noise: &NoiseDraw,
) -> Result<Ensemble> {
    check_step_inputs(ensemble, problem, noise)?;
    let consensus = consensus_points_with(ensemble, config.alpha, config.p, config.parallel)?;
    let update = |i: usize| -> (Vec<f64>, Vec<f64>) {
        let x = &ensemble.positions[i];
        let gx = &ensemble.objectives[i];
        let w = ensemble.weights[i].as_slice();
        let mut y = propose(x, &consensus[i], noise.agent(i), config);
        problem.domain().clip_in_place(&mut y);
        let mut gy = vec![0.0; problem.n_objectives()];
        problem.eval_into(&y, &mut gy);
        if gp_unchecked(&gy, w, config.p) < gp_unchecked(gx, w, config.p) {
            (y, gy)
        } else {
            (x.clone(), gx.clone())
        }
    };
    let moved: Vec<(Vec<f64>, Vec<f64>)> = if config.parallel {
        (0..ensemble.len()).into_par_iter().map(update).collect()
    } else {
        (0..ensemble.len()).map(update).collect()
    };
    let (positions, objectives) = moved.into_iter().unzip();
    Ok(Ensemble {
        positions,
        weights: ensemble.weights.clone(),
        objectives,
        iteration: ensemble.iteration + 1,
    })
}

/// Dispatches on `config.mode`.
pub fn step<R: Rng + ?Sized>(
    ensemble: &Ensemble,
    problem: &Problem,
    config: &SolverConfig,
    rng: &mut R,
) -> Result<Ensemble> {
    match config.mode {
        UpdateMode::Plain => step_plain(ensemble, problem, config, rng),
        UpdateMode::Greedy => step_greedy(ensemble, problem, config, rng),
    }
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    /// `k_max + 1` entries: the initial state and one per step.
    pub trace: MetricTrace,
    pub positions: Vec<Vec<f64>>,
    pub weights: Vec<WeightVector>,
    pub images: Vec<Vec<f64>>,
}

/// Runs `k_max` steps from a fresh ensemble. `observer` is called on the
/// initial ensemble and after every step; its samples form the trace.
pub fn run<R, F>(
    problem: &Problem,
    config: &SolverConfig,
    weights: Vec<WeightVector>,
    rng: &mut R,
    mut observer: F,
) -> Result<RunRecord>
where
    R: Rng + ?Sized,
    F: FnMut(&Ensemble) -> Result<MetricSample>,
{
    config.validate()?;
    let at = |iteration: usize| move |e: Error| Error::Step {
        iteration,
        source: Box::new(e),
    };
    let mut ensemble = init_ensemble(problem, config, weights, rng)?;
    let mut trace = MetricTrace::new();
    trace.push(0, observer(&ensemble).map_err(at(0))?)?;
    for k in 1..=config.k_max {
        ensemble = step(&ensemble, problem, config, rng).map_err(at(k))?;
        trace.push(k, observer(&ensemble).map_err(at(k))?)?;
    }
    let Ensemble {
        positions,
        weights,
        objectives,
        ..
    } = ensemble;
    Ok(RunRecord {
        run: 0,
        seed: config.seed,
        trace,
        positions,
        weights,
        images: objectives,
    })
}
