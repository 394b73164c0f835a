//! Convergence metrics.
//!
//! - `err2`: mean squared distance between each agent and the oracle solution
//!   of its own sub-problem, `(1/N) sum_i |X^i - x(w^i)|^2`.
//! - `igd`: inverted generational distance, the standard mean-of-minimum
//!   distances form `(1/|P*|) sum_{p in P*} min_a |p - a|` with Euclidean
//!   distance in objective space.

use crate::error::{Error, Result};
use crate::problems::ReferenceSolutionSet;
use crate::solver::Ensemble;

/// Metric values at one iteration; `None` when the metric was not requested.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricSample {
    pub err2: Option<f64>,
    pub igd: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRecord {
    pub iteration: usize,
    pub err2: Option<f64>,
    pub igd: Option<f64>,
}

/// Per-iteration metric records with strictly increasing iterations from 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricTrace {
    records: Vec<MetricRecord>,
}

impl MetricTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, iteration: usize, sample: MetricSample) -> Result<()> {
        let expected_order = match self.records.last() {
            None => iteration == 0,
            Some(last) => iteration > last.iteration,
        };
        if !expected_order {
            return Err(Error::Metric(format!(
                "iteration {iteration} is out of order"
            )));
        }
        for (name, v) in [("err2", sample.err2), ("igd", sample.igd)] {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Metric(format!(
                        "{name} = {v} at iteration {iteration} is not a finite nonnegative value"
                    )));
                }
            }
        }
        self.records.push(MetricRecord {
            iteration,
            err2: sample.err2,
            igd: sample.igd,
        });
        Ok(())
    }

    pub fn records(&self) -> &[MetricRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn err2(positions: &[Vec<f64>], references: &ReferenceSolutionSet) -> Result<f64> {
    if positions.len() != references.len() {
        return Err(Error::LengthMismatch {
            left: positions.len(),
            right: references.len(),
        });
    }
    if positions.is_empty() {
        return Err(Error::Empty("err2 over zero agents"));
    }
    let mut total = 0.0;
    for (x, r) in positions.iter().zip(references.positions()) {
        if x.len() != r.len() {
            return Err(Error::DimensionMismatch {
                expected: r.len(),
                got: x.len(),
            });
        }
        total += squared_distance(x, r);
    }
    Ok(total / positions.len() as f64)
}

pub fn igd(images: &[Vec<f64>], reference_front: &[Vec<f64>]) -> Result<f64> {
    if images.is_empty() {
        return Err(Error::Empty("igd without images"));
    }
    if reference_front.is_empty() {
        return Err(Error::Empty("igd without reference front"));
    }
    let m = reference_front[0].len();
    if let Some(bad) = images.iter().chain(reference_front).find(|v| v.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    let total: f64 = reference_front
        .iter()
        .map(|p| {
            images
                .iter()
                .map(|a| squared_distance(p, a))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / reference_front.len() as f64)
}

/// Fraction of images not strictly dominated, by more than `tolerance` in
/// every objective, by another image. An empty list gives 1.
pub fn nondominated_fraction(images: &[Vec<f64>], tolerance: f64) -> f64 {
    if images.is_empty() {
        return 1.0;
    }
    let kept = images
        .iter()
        .enumerate()
        .filter(|&(i, a)| {
            !images
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && strictly_dominates(b, a, tolerance))
        })
        .count();
    kept as f64 / images.len() as f64
}

/// `b_k < a_k - tolerance` for every `k`.
pub fn strictly_dominates(b: &[f64], a: &[f64], tolerance: f64) -> bool {
    b.len() == a.len() && b.iter().zip(a).all(|(bk, ak)| *bk < ak - tolerance)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Computes the requested metrics for an ensemble.
#[derive(Debug, Clone, Default)]
pub struct MetricObserver {
    references: Option<ReferenceSolutionSet>,
    front: Option<Vec<Vec<f64>>>,
}

impl MetricObserver {
    /// `references` enables err2, `front` enables IGD.
    pub fn new(references: Option<ReferenceSolutionSet>, front: Option<Vec<Vec<f64>>>) -> Self {
        Self { references, front }
    }

    pub fn observe(&self, ensemble: &Ensemble) -> Result<MetricSample> {
        let err2 = match &self.references {
            Some(refs) => {
                // Agent i is compared with the solution of its own weight.
                let aligned = refs.len() == ensemble.len()
                    && refs
                        .entries()
                        .iter()
                        .zip(ensemble.weights())
                        .all(|(r, w)| r.weight == *w);
                if !aligned {
                    return Err(Error::Metric(
                        "reference solutions are not aligned with the agent weights".into(),
                    ));
                }
                Some(err2(ensemble.positions(), refs)?)
            }
            None => None,
        };
        let igd = match &self.front {
            Some(front) => Some(igd(ensemble.objectives(), front)?),
            None => None,
        };
        Ok(MetricSample { err2, igd })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Problem, ReferenceSolution};
    use crate::scalarization::WeightVector;
    use proptest::prelude::*;

    fn refs(positions: &[[f64; 2]]) -> ReferenceSolutionSet {
        let p = Problem::problem1();
        let n = positions.len();
        let entries = positions
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let a = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
                ReferenceSolution {
                    weight: WeightVector::new(vec![a, 1.0 - a]).unwrap(),
                    position: x.to_vec(),
                    image: p.eval_objectives(x).unwrap(),
                }
            })
            .collect();
        ReferenceSolutionSet::new(&p, entries).unwrap()
    }

    #[test]
    fn err2_examples() {
        let r = refs(&[[0.1, 0.2], [0.3, 0.4], [0.5, 0.6], [0.7, 0.8]]);
        let exact: Vec<Vec<f64>> = r.positions().map(|x| x.to_vec()).collect();
        assert_eq!(err2(&exact, &r).unwrap(), 0.0);
        let mut off = exact.clone();
        off[2][0] += 0.3;
        off[2][1] -= 0.4;
        assert!((err2(&off, &r).unwrap() - 0.25 / 4.0).abs() < 1e-15);
        assert!(err2(&exact[..3], &r).is_err());
    }

    #[test]
    fn igd_examples() {
        let front = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]];
        assert_eq!(igd(&front, &front).unwrap(), 0.0);
        assert_eq!(igd(&[vec![3.0, 4.0]], &[vec![0.0, 0.0]]).unwrap(), 5.0);
        assert!(igd(&[], &front).is_err());
        assert!(igd(&front, &[]).is_err());
        assert!(igd(&[vec![1.0, 2.0, 3.0]], &front).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(nondominated_fraction(&[vec![0.3, 0.3]], 0.0), 1.0);
        assert_eq!(nondominated_fraction(&[vec![0.0, 1.0], vec![1.0, 0.0]], 0.0), 1.0);
        assert_eq!(nondominated_fraction(&[vec![0.0, 0.0], vec![1.0, 1.0]], 0.0), 0.5);
        // Within tolerance nothing counts as dominated.
        assert_eq!(nondominated_fraction(&[vec![0.0, 0.0], vec![1.0, 1.0]], 2.0), 1.0);
        // Weak dominance (equal in one objective) is not strict.
        assert_eq!(nondominated_fraction(&[vec![0.0, 1.0], vec![0.0, 2.0]], 0.0), 1.0);
    }

    #[test]
    fn trace_ordering() {
        let mut t = MetricTrace::new();
        assert!(t.push(1, MetricSample::default()).is_err());
        t.push(0, MetricSample::default()).unwrap();
        assert!(t.push(0, MetricSample::default()).is_err());
        assert!(t
            .push(1, MetricSample { err2: Some(-1.0), igd: None })
            .is_err());
        assert!(t
            .push(1, MetricSample { err2: None, igd: Some(f64::NAN) })
            .is_err());
        t.push(1, MetricSample { err2: Some(0.5), igd: Some(0.1) }).unwrap();
        assert_eq!(t.len(), 2);
    }

    fn points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), n)
    }

    proptest! {
        #[test]
        fn igd_permutation_invariant(a in points(1..20), front in points(1..20), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut rng = crate::solver::rng_from_seed(seed);
            let mut a2 = a.clone();
            let mut f2 = front.clone();
            a2.shuffle(&mut rng);
            f2.shuffle(&mut rng);
            let x = igd(&a, &front).unwrap();
            let y = igd(&a2, &f2).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
        }

        #[test]
        fn adding_images_never_increases_igd(a in points(1..20), b in points(1..20), front in points(1..20)) {
            let mut union = a.clone();
            union.extend(b);
            prop_assert!(igd(&union, &front).unwrap() <= igd(&a, &front).unwrap());
        }

        #[test]
        fn front_subsets_are_nondominated(ts in prop::collection::vec(0.0f64..=1.0, 1..50)) {
            let images: Vec<Vec<f64>> = ts.iter().map(|t| vec![*t, 1.0 - t * t]).collect();
            prop_assert_eq!(nondominated_fraction(&images, 0.0), 1.0);
        }
    }
}
