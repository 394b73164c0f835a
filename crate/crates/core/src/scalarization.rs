//! Weight simplex and the weighted-norm scalarization family.
//!
//! For `p` in `[1, inf)`:
//!
//! ```text
//! G_p(g, w) = ( sum_k w_k |g_k|^p )^(1/p)
//! ```
//!
//! and for `p = inf` (weighted Chebyshev):
//!
//! ```text
//! G_inf(g, w) = max_k w_k |g_k|
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance on `sum_k w_k = 1`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// A point on the probability simplex: nonnegative components summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidWeights("no components".into()));
        }
        for (k, &c) in components.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "component {k} = {c} is not a finite nonnegative number"
                )));
            }
        }
        let sum: f64 = components.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "components sum to {sum}, expected 1"
            )));
        }
        Ok(Self(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for WeightVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The exponent `p` of the scalarization, shared by all sub-problems of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ScalarizationOrder {
    Finite(f64),
    #[default]
    Infinity,
}

impl ScalarizationOrder {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidOrder(p));
        }
        if p.is_infinite() {
            return Ok(Self::Infinity);
        }
        Ok(Self::Finite(p))
    }

    /// Maps `f64::INFINITY` to [`ScalarizationOrder::Infinity`].
    pub fn from_f64(p: f64) -> Result<Self> {
        Self::finite(p)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    fn check(self) -> Result<()> {
        match self {
            Self::Finite(p) if p.is_nan() || p < 1.0 => Err(Error::InvalidOrder(p)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ScalarizationOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ScalarizationOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "chebyshev" => Ok(Self::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("cannot parse p = `{s}`")))?;
                Self::finite(p)
            }
        }
    }
}

/// Evaluates `G_p(objective_values, w)`.
pub fn evaluate_gp(objective_values: &[f64], w: &WeightVector, p: ScalarizationOrder) -> Result<f64> {
    if objective_values.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            got: objective_values.len(),
        });
    }
    p.check()?;
    Ok(gp_unchecked(objective_values, w.as_slice(), p))
}

/// `G_p` without argument validation. Lengths must match.
///
/// Finite `p` is computed as `M * (sum_k w_k (|g_k|/M)^p)^(1/p)` with `M` the
/// largest `|g_k|` over components with `w_k > 0`, so large `p` cannot overflow.
/// Components with zero weight never influence the result.
#[inline]
pub(crate) fn gp_unchecked(values: &[f64], w: &[f64], p: ScalarizationOrder) -> f64 {
    debug_assert_eq!(values.len(), w.len());
    match p {
        ScalarizationOrder::Infinity => values
            .iter()
            .zip(w)
            .filter(|(_, &wk)| wk > 0.0)
            .map(|(g, wk)| wk * g.abs())
            .fold(0.0, f64::max_nan),
        ScalarizationOrder::Finite(1.0) => values
            .iter()
            .zip(w)
            .filter(|(_, &wk)| wk > 0.0)
            .map(|(g, wk)| wk * g.abs())
            .sum(),
        ScalarizationOrder::Finite(p) => {
            let scale = values
                .iter()
                .zip(w)
                .filter(|(_, &wk)| wk > 0.0)
                .map(|(g, _)| g.abs())
                .fold(0.0, f64::max_nan);
            if scale == 0.0 {
                return 0.0;
            }
            if !scale.is_finite() {
                return scale;
            }
            let sum: f64 = values
                .iter()
                .zip(w)
                .filter(|(_, &wk)| wk > 0.0)
                .map(|(g, wk)| wk * (g.abs() / scale).powf(p))
                .sum();
            scale * sum.powf(1.0 / p)
        }
    }
}

/// `max` that propagates NaN, so a NaN objective is never silently dropped.
trait MaxNan {
    fn max_nan(self, other: f64) -> f64;
}

impl MaxNan for f64 {
    #[inline]
    fn max_nan(self, other: f64) -> f64 {
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.max(other)
        }
    }
}

/// Deterministic, uniformly spread weight vectors.
///
/// For `m = 2` this is the grid `w^i = ((i-1)/(N-1), 1 - (i-1)/(N-1))`,
/// `i = 1..N`. For `m > 2` it is the simplex-lattice design: every composition
/// of `H` into `m` nonnegative parts, scaled by `1/H`, with `H` the smallest
/// value giving at least `N` points. The `m > 2` list can therefore be longer
/// than `N`; its order is descending lexicographic in the lattice coordinates.
pub fn generate_uniform_weights(n: usize, m: usize) -> Result<Vec<WeightVector>> {
    if m < 2 {
        return Err(Error::InvalidWeights(format!(
            "need at least 2 objectives, got m = {m}"
        )));
    }
    if m == 2 {
        if n < 2 {
            return Err(Error::InvalidWeights(format!(
                "need N >= 2 weight vectors for m = 2, got N = {n}"
            )));
        }
        let denom = (n - 1) as f64;
        return (0..n)
            .map(|i| {
                let first = i as f64 / denom;
                WeightVector::new(vec![first, 1.0 - first])
            })
            .collect();
    }

    let mut h = 1usize;
    while lattice_size(h, m) < n {
        h += 1;
    }
    let mut out = Vec::with_capacity(lattice_size(h, m));
    let mut parts = vec![0usize; m];
    compositions(h, 0, &mut parts, &mut |parts| {
        let comps: Vec<f64> = parts.iter().map(|&c| c as f64 / h as f64).collect();
        // Exact division can drift by an ulp; renormalize the last component.
        let head: f64 = comps[..m - 1].iter().sum();
        let mut comps = comps;
        comps[m - 1] = (1.0 - head).max(0.0);
        out.push(WeightVector::new(comps));
    });
    out.into_iter().collect()
}

/// Number of compositions of `h` into `m` parts: `C(h + m - 1, m - 1)`.
fn lattice_size(h: usize, m: usize) -> usize {
    let (n, k) = (h + m - 1, m - 1);
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(usize::MAX as u128) as usize
}

fn compositions(remaining: usize, slot: usize, parts: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if slot == parts.len() - 1 {
        parts[slot] = remaining;
        emit(parts);
        return;
    }
    for c in (0..=remaining).rev() {
        parts[slot] = c;
        compositions(remaining - c, slot + 1, parts, emit);
    }
}
