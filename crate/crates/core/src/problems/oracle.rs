//! Brute-force ground truth for a single scalar sub-problem.
//!
//! The minimizer of `G_p(g(x), w)` over the box is found by nested line
//! minimization: `min_x G = min_{x_1} min_{x_2} ... G`. Along each axis a
//! uniform grid scan picks the best cell, and a golden-section search on the
//! two neighbouring cells refines it. Golden section only needs unimodality
//! on the bracket, so the kink of the Chebyshev scalarization does not stall
//! it the way axis-aligned pattern moves do.

use crate::error::{Error, Result};
use crate::scalarization::{gp_unchecked, ScalarizationOrder, WeightVector};

use super::Problem;

/// Smallest accepted evaluation budget.
pub const MIN_ORACLE_BUDGET: usize = 1000;

/// Largest search dimension the nested scan supports.
pub const ORACLE_MAX_DIM: usize = 3;

const MIN_POINTS_PER_AXIS: usize = 10;
const MAX_GOLDEN_ITERATIONS: usize = 200;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Approximate global minimizer of `G_p(g(.), w)` on the problem's domain.
///
/// Each axis is scanned with `n` points, `n` the smallest integer with
/// `n^d >= budget`; the refinement resolves positions to about `1e-13`.
pub fn subproblem_oracle(
    problem: &Problem,
    w: &WeightVector,
    p: ScalarizationOrder,
    budget: usize,
) -> Result<Vec<f64>> {
    if w.len() != problem.n_objectives() {
        return Err(Error::DimensionMismatch {
            expected: problem.n_objectives(),
            got: w.len(),
        });
    }
    if let ScalarizationOrder::Finite(v) = p {
        if v.is_nan() || v < 1.0 {
            return Err(Error::InvalidOrder(v));
        }
    }
    let d = problem.dim();
    if d > ORACLE_MAX_DIM {
        return Err(Error::Oracle(format!(
            "grid oracle supports d <= {ORACLE_MAX_DIM}, problem has d = {d}"
        )));
    }
    if budget < MIN_ORACLE_BUDGET {
        return Err(Error::Oracle(format!(
            "budget {budget} is below the minimum of {MIN_ORACLE_BUDGET}"
        )));
    }
    let per_axis = points_per_axis(budget, d);
    if per_axis < MIN_POINTS_PER_AXIS {
        return Err(Error::Oracle(format!(
            "budget {budget} gives {per_axis} grid points per axis, need {MIN_POINTS_PER_AXIS}"
        )));
    }

    let mut search = NestedSearch {
        problem,
        weights: w.as_slice(),
        p,
        per_axis,
        image: vec![0.0; problem.n_objectives()],
    };
    let domain = problem.domain();
    let mut x: Vec<f64> = domain
        .lower()
        .iter()
        .zip(domain.upper())
        .map(|(lo, hi)| 0.5 * (lo + hi))
        .collect();
    search.minimize(0, &mut x);
    Ok(x)
}

fn points_per_axis(budget: usize, d: usize) -> usize {
    let mut n = 2usize;
    while n.saturating_pow(d as u32) < budget {
        n += 1;
    }
    n
}

struct NestedSearch<'a> {
    problem: &'a Problem,
    weights: &'a [f64],
    p: ScalarizationOrder,
    per_axis: usize,
    image: Vec<f64>,
}

impl NestedSearch<'_> {
    /// Minimizes over `x[axis..]` with `x[..axis]` held fixed. On return
    /// `x[axis..]` holds the best point found; the value is returned.
    fn minimize(&mut self, axis: usize, x: &mut [f64]) -> f64 {
        let lo = self.problem.domain().lower()[axis];
        let hi = self.problem.domain().upper()[axis];
        let n = self.per_axis;
        let cell = (hi - lo) / (n - 1) as f64;

        let mut best = Best {
            value: f64::INFINITY,
            point: x.to_vec(),
        };
        let mut best_j = 0;
        for j in 0..n {
            let t = if j == n - 1 { hi } else { lo + j as f64 * cell };
            let before = best.value;
            self.probe(axis, x, t, &mut best);
            if best.value < before {
                best_j = j;
            }
        }

        let mut a = lo + best_j.saturating_sub(1) as f64 * cell;
        let mut b = (lo + (best_j + 1) as f64 * cell).min(hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = self.probe(axis, x, c, &mut best);
        let mut fd = self.probe(axis, x, d, &mut best);
        for _ in 0..MAX_GOLDEN_ITERATIONS {
            if b - a <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = self.probe(axis, x, c, &mut best);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = self.probe(axis, x, d, &mut best);
            }
        }

        x.copy_from_slice(&best.point);
        best.value
    }

    /// Sets `x[axis] = t`, minimizes the remaining axes, records the result.
    fn probe(&mut self, axis: usize, x: &mut [f64], t: f64, best: &mut Best) -> f64 {
        x[axis] = t;
        let value = if axis + 1 == x.len() {
            self.problem.eval_into(x, &mut self.image);
            gp_unchecked(&self.image, self.weights, self.p)
        } else {
            self.minimize(axis + 1, x)
        };
        if value < best.value {
            best.value = value;
            best.point.copy_from_slice(x);
        }
        value
    }
}

struct Best {
    value: f64,
    point: Vec<f64>,
}
