//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the solver or metric code paths it is checked
//! against; each function is a direct transcription of its formula.

#![allow(dead_code)]

/// Problem 1 written out term by term.
pub fn problem1_naive(x1: f64, x2: f64) -> (f64, f64) {
    let g1 = 5.0 * (x1 - 0.1) * (x1 - 0.1) + (x2 - 0.1) * (x2 - 0.1);
    let g2 = (x1 - 0.9) * (x1 - 0.9) + 5.0 * (x2 - 0.9) * (x2 - 0.9);
    (g1, g2)
}

/// Minimizer of `t g1 + (1 - t) g2` for Problem 1, from the stationarity
/// conditions `10t(x1-0.1) + 2(1-t)(x1-0.9) = 0` and
/// `2t(x2-0.1) + 10(1-t)(x2-0.9) = 0`.
pub fn problem1_linear_minimizer(t: f64) -> (f64, f64) {
    ((1.8 - 0.8 * t) / (2.0 + 8.0 * t), (9.0 - 8.8 * t) / (10.0 - 8.0 * t))
}

/// Chebyshev sub-problem solution of Problem 1 for `w = (a, 1 - a)`,
/// `0 < a < 1`: the point of the (convex) Pareto set where `a g1 = (1-a) g2`,
/// located by bisection along the linear-scalarization path.
pub fn problem1_chebyshev_minimizer(a: f64) -> (f64, f64) {
    let h = |t: f64| {
        let (x1, x2) = problem1_linear_minimizer(t);
        let (g1, g2) = problem1_naive(x1, x2);
        a * g1 - (1.0 - a) * g2
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    problem1_linear_minimizer(0.5 * (lo + hi))
}

/// Two-loop mean squared distance.
pub fn err2_naive(positions: &[Vec<f64>], references: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for i in 0..positions.len() {
        let mut sq = 0.0;
        for l in 0..positions[i].len() {
            let diff = positions[i][l] - references[i][l];
            sq += diff * diff;
        }
        total += sq;
    }
    total / positions.len() as f64
}

/// Brute-force IGD over all pairs.
pub fn igd_naive(images: &[Vec<f64>], front: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for p in front {
        let mut best = f64::INFINITY;
        for a in images {
            let mut sq = 0.0;
            for k in 0..p.len() {
                sq += (p[k] - a[k]).powi(2);
            }
            let d = sq.sqrt();
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    total / front.len() as f64
}

/// Weighted Chebyshev value for two objectives.
pub fn chebyshev2(g: &[f64], w: &[f64]) -> f64 {
    let a = w[0] * g[0].abs();
    let b = w[1] * g[1].abs();
    if a > b {
        a
    } else {
        b
    }
}

/// One plain update written directly from the update rule, with an
/// unshifted consensus point (valid while `alpha * G` stays well below the
/// exponent underflow threshold) and explicit clipping.
#[allow(clippy::too_many_arguments)]
pub fn plain_step_naive(
    positions: &[Vec<f64>],
    images: &[Vec<f64>],
    weights: &[Vec<f64>],
    noise: &[Vec<f64>],
    lambda: f64,
    sigma: f64,
    dt: f64,
    alpha: f64,
    lower: &[f64],
    upper: &[f64],
) -> Vec<Vec<f64>> {
    let n = positions.len();
    let d = positions[0].len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut num = vec![0.0; d];
        let mut z = 0.0;
        for j in 0..n {
            let c = (-alpha * chebyshev2(&images[j], &weights[i])).exp();
            z += c;
            for l in 0..d {
                num[l] += c * positions[j][l];
            }
        }
        let mut next = vec![0.0; d];
        for l in 0..d {
            let consensus = num[l] / z;
            let diff = consensus - positions[i][l];
            let mut v = positions[i][l] + lambda * dt * diff + sigma * dt.sqrt() * diff * noise[i][l];
            if v < lower[l] {
                v = lower[l];
            }
            if v > upper[l] {
                v = upper[l];
            }
            next[l] = v;
        }
        out.push(next);
    }
    out
}
