//! Benchmark problems, box domains and ground-truth references.
//!
//! Built-in problems (all bi-objective):
//!
//! | name       | d        | domain                     |
//! |------------|----------|----------------------------|
//! | `problem1` | 2        | `[0,1]^2`                  |
//! | `deb2dk`   | `>= 2`   | `[0,1]^d`                  |
//! | `uf4`      | `>= 3`   | `[0,1] x [-2,2]^(d-1)`     |
//! | `uf7`      | `>= 3`   | `[0,1] x [-1,1]^(d-1)`     |

mod oracle;

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalarization::{ScalarizationOrder, WeightVector};

pub use oracle::{subproblem_oracle, MIN_ORACLE_BUDGET, ORACLE_MAX_DIM};

/// An axis-aligned box `[lower_l, upper_l]` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidDomain(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidDomain("zero-dimensional box".into()));
        }
        for (l, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {l}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn unit(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d], vec![1.0; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub(crate) fn clip_in_place(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(*lo).min(*hi);
        }
    }
}

/// Projects `x` onto the box coordinate-wise.
pub fn clip_to_domain(domain: &BoxDomain, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: x.len(),
        });
    }
    let mut out = x.to_vec();
    domain.clip_in_place(&mut out);
    Ok(out)
}

/// `count` independent uniform draws from the box, coordinates drawn in order.
pub fn sample_uniform<R: Rng + ?Sized>(domain: &BoxDomain, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            domain
                .lower
                .iter()
                .zip(&domain.upper)
                .map(|(&lo, &hi)| rng.random_range(lo..=hi))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// `g = (5(x1-0.1)^2 + (x2-0.1)^2, (x1-0.9)^2 + 5(x2-0.9)^2)` on `[0,1]^2`.
    Problem1,
    /// DEB2DK with one knee (`K = 1`).
    Deb2dk,
    /// UF4 from the CEC 2009 unconstrained suite.
    Uf4,
    /// UF7 from the CEC 2009 unconstrained suite.
    Uf7,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Problem1 => "problem1",
            Self::Deb2dk => "deb2dk",
            Self::Uf4 => "uf4",
            Self::Uf7 => "uf7",
        }
    }

    pub fn default_dim(self) -> usize {
        match self {
            Self::Problem1 | Self::Deb2dk => 2,
            Self::Uf4 | Self::Uf7 => 5,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Problem1 => "convex quadratic pair on [0,1]^2 (d fixed at 2)",
            Self::Deb2dk => "DEB2DK, one knee (K=1), [0,1]^d, d >= 2",
            Self::Uf4 => "CEC2009 UF4, concave front f2 = 1 - f1^2, d >= 3",
            Self::Uf7 => "CEC2009 UF7, linear front f2 = 1 - f1, d >= 3",
        }
    }

    pub const ALL: [ProblemKind; 4] = [Self::Problem1, Self::Deb2dk, Self::Uf4, Self::Uf7];
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of knees of the DEB2DK instance.
const DEB2DK_KNEES: f64 = 1.0;

/// A bi-objective benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    kind: ProblemKind,
    dim: usize,
    domain: BoxDomain,
}

impl Problem {
    pub fn problem1() -> Self {
        Self {
            kind: ProblemKind::Problem1,
            dim: 2,
            domain: BoxDomain::unit(2).expect("unit box"),
        }
    }

    pub fn deb2dk(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig(format!("deb2dk needs d >= 2, got {dim}")));
        }
        Ok(Self {
            kind: ProblemKind::Deb2dk,
            dim,
            domain: BoxDomain::unit(dim)?,
        })
    }

    pub fn uf4(dim: usize) -> Result<Self> {
        Self::uf(ProblemKind::Uf4, dim, 2.0)
    }

    pub fn uf7(dim: usize) -> Result<Self> {
        Self::uf(ProblemKind::Uf7, dim, 1.0)
    }

    fn uf(kind: ProblemKind, dim: usize, half_width: f64) -> Result<Self> {
        // Both index sets J1 (odd) and J2 (even) in [2, d] must be non-empty.
        if dim < 3 {
            return Err(Error::InvalidConfig(format!("{kind} needs d >= 3, got {dim}")));
        }
        let mut lower = vec![-half_width; dim];
        let mut upper = vec![half_width; dim];
        lower[0] = 0.0;
        upper[0] = 1.0;
        Ok(Self {
            kind,
            dim,
            domain: BoxDomain::new(lower, upper)?,
        })
    }

    /// Looks a problem up by name; `dim = None` selects the default dimension.
    pub fn by_name(name: &str, dim: Option<usize>) -> Result<Self> {
        let kind = match name.trim().to_ascii_lowercase().as_str() {
            "problem1" => ProblemKind::Problem1,
            "deb2dk" => ProblemKind::Deb2dk,
            "uf4" => ProblemKind::Uf4,
            "uf7" => ProblemKind::Uf7,
            _ => return Err(Error::UnknownProblem(name.to_string())),
        };
        let dim = dim.unwrap_or(kind.default_dim());
        match kind {
            ProblemKind::Problem1 if dim != 2 => Err(Error::InvalidConfig(format!(
                "problem1 is fixed at d = 2, got {dim}"
            ))),
            ProblemKind::Problem1 => Ok(Self::problem1()),
            ProblemKind::Deb2dk => Self::deb2dk(dim),
            ProblemKind::Uf4 => Self::uf4(dim),
            ProblemKind::Uf7 => Self::uf7(dim),
        }
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_objectives(&self) -> usize {
        2
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// `g(x)`. Points outside the domain are evaluated by the same formulas.
    pub fn eval_objectives(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if let Some(l) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(l));
        }
        let mut out = vec![0.0; 2];
        self.eval_into(x, &mut out);
        Ok(out)
    }

    /// Writes `g(x)` into `out` without validation.
    #[inline(never)]
    pub(crate) fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match self.kind {
            ProblemKind::Problem1 => {
                let (a, b) = (x[0], x[1]);
                out[0] = 5.0 * (a - 0.1).powi(2) + (b - 0.1).powi(2);
                out[1] = (a - 0.9).powi(2) + 5.0 * (b - 0.9).powi(2);
            }
            ProblemKind::Deb2dk => {
                let tail: f64 = x[1..].iter().sum();
                let g = 1.0 + 9.0 * tail / (self.dim - 1) as f64;
                let k = DEB2DK_KNEES;
                let r = 5.0 + 10.0 * (x[0] - 0.5).powi(2) + (2.0 * k * PI * x[0]).cos() / k;
                let angle = 0.5 * PI * x[0];
                out[0] = g * r * angle.sin();
                out[1] = g * r * angle.cos();
            }
            ProblemKind::Uf4 => {
                let (odd, even) = self.uf_tails(x, |y| {
                    let t = y.abs();
                    t / (1.0 + (2.0 * t).exp())
                });
                out[0] = x[0] + odd;
                out[1] = 1.0 - x[0] * x[0] + even;
            }
            ProblemKind::Uf7 => {
                let (odd, even) = self.uf_tails(x, |y| y * y);
                // Real fifth root, finite for the negative values a proposal may take.
                let root = x[0].signum() * x[0].abs().powf(0.2);
                out[0] = root + odd;
                out[1] = 1.0 - root + even;
            }
        }
    }

    /// `(2/|J1|) sum_{J1} h(y_j)` and `(2/|J2|) sum_{J2} h(y_j)` with
    /// `y_j = x_j - sin(6 pi x_1 + j pi / d)`, `j` 1-based, J1 odd, J2 even.
    fn uf_tails(&self, x: &[f64], h: impl Fn(f64) -> f64) -> (f64, f64) {
        let d = self.dim as f64;
        let (mut odd, mut n_odd, mut even, mut n_even) = (0.0, 0usize, 0.0, 0usize);
        for (idx, &xj) in x.iter().enumerate().skip(1) {
            let j = (idx + 1) as f64;
            let y = xj - (6.0 * PI * x[0] + j * PI / d).sin();
            if (idx + 1) % 2 == 1 {
                odd += h(y);
                n_odd += 1;
            } else {
                even += h(y);
                n_even += 1;
            }
        }
        (2.0 * odd / n_odd as f64, 2.0 * even / n_even as f64)
    }

    /// Analytic front point at parameter `t` in `[0, 1]`, when known.
    pub fn front_point(&self, t: f64) -> Option<Vec<f64>> {
        match self.kind {
            ProblemKind::Uf4 => Some(vec![t, 1.0 - t * t]),
            ProblemKind::Uf7 => Some(vec![t, 1.0 - t]),
            ProblemKind::Problem1 | ProblemKind::Deb2dk => None,
        }
    }

    pub fn has_analytic_front(&self) -> bool {
        self.front_point(0.0).is_some()
    }

    /// Whether the grid oracle is usable (`d <= 3`).
    pub fn supports_oracle(&self) -> bool {
        self.dim <= ORACLE_MAX_DIM
    }
}

/// Ground truth for one sub-problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub weight: WeightVector,
    pub position: Vec<f64>,
    pub image: Vec<f64>,
}

/// Oracle solutions `x(w^i)` aligned with a weight list.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolutionSet {
    entries: Vec<ReferenceSolution>,
}

impl ReferenceSolutionSet {
    /// Validates containment and that each image equals `g(position)` to 1e-10.
    pub fn new(problem: &Problem, entries: Vec<ReferenceSolution>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if !problem.domain().contains(&e.position) {
                return Err(Error::Oracle(format!("entry {i}: position outside the domain")));
            }
            let fresh = problem.eval_objectives(&e.position)?;
            if fresh.len() != e.image.len()
                || fresh.iter().zip(&e.image).any(|(a, b)| (a - b).abs() > 1e-10)
            {
                return Err(Error::Oracle(format!(
                    "entry {i}: image does not match the objective at its position"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[ReferenceSolution] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.iter().map(|e| e.position.as_slice())
    }

    pub fn images(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|e| e.image.clone()).collect()
    }
}

/// Runs [`subproblem_oracle`] for every weight. Each sub-problem is
/// independent, so the parallel path returns the same set as the serial one.
pub fn reference_solutions(
    problem: &Problem,
    weights: &[WeightVector],
    p: ScalarizationOrder,
    budget: usize,
    parallel: bool,
) -> Result<ReferenceSolutionSet> {
    let solve = |w: &WeightVector| -> Result<ReferenceSolution> {
        let position = subproblem_oracle(problem, w, p, budget)?;
        let image = problem.eval_objectives(&position)?;
        Ok(ReferenceSolution {
            weight: w.clone(),
            position,
            image,
        })
    };
    let entries = if parallel {
        weights.par_iter().map(solve).collect::<Result<Vec<_>>>()?
    } else {
        weights.iter().map(solve).collect::<Result<Vec<_>>>()?
    };
    ReferenceSolutionSet::new(problem, entries)
}

/// `count` points on the weak Pareto front in objective space.
///
/// Uses the analytic parametrization with equispaced `t` when the problem has
/// one (`count = 1` gives `t = 0.5`). Otherwise the images of `fallback` are
/// returned as-is and `count` is ignored.
pub fn reference_front(
    problem: &Problem,
    count: usize,
    fallback: Option<&ReferenceSolutionSet>,
) -> Result<Vec<Vec<f64>>> {
    if problem.has_analytic_front() {
        if count == 0 {
            return Err(Error::Empty("reference front with zero points"));
        }
        let params: Vec<f64> = if count == 1 {
            vec![0.5]
        } else {
            (0..count).map(|j| j as f64 / (count - 1) as f64).collect()
        };
        return Ok(params
            .into_iter()
            .map(|t| problem.front_point(t).expect("analytic front"))
            .collect());
    }
    match fallback {
        Some(set) if !set.is_empty() => Ok(set.images()),
        _ => Err(Error::NoFront(problem.name().to_string())),
    }
}
