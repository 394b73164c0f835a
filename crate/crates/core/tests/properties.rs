use mcbo::metrics::err2;
use mcbo::problems::{clip_to_domain, sample_uniform, BoxDomain, Problem, ReferenceSolution, ReferenceSolutionSet};
use mcbo::scalarization::{generate_uniform_weights, ScalarizationOrder, WeightVector};
use mcbo::solver::{
    consensus_points, consensus_points_with, rng_from_seed, run, step_greedy, step_plain_with_noise,
    Ensemble, NoiseDraw, SolverConfig, UpdateMode,
};
use mcbo::MetricSample;
use proptest::prelude::*;

fn problem(which: u8) -> Problem {
    match which % 4 {
        0 => Problem::problem1(),
        1 => Problem::deb2dk(2).unwrap(),
        2 => Problem::uf4(3).unwrap(),
        _ => Problem::uf7(3).unwrap(),
    }
}

fn random_ensemble(p: &Problem, n: usize, seed: u64) -> Ensemble {
    let mut rng = rng_from_seed(seed);
    let positions = sample_uniform(p.domain(), n, &mut rng);
    Ensemble::from_positions(p, positions, generate_uniform_weights(n, 2).unwrap()).unwrap()
}

fn order(which: u8) -> ScalarizationOrder {
    match which % 3 {
        0 => ScalarizationOrder::Infinity,
        1 => ScalarizationOrder::Finite(1.0),
        _ => ScalarizationOrder::Finite(3.5),
    }
}

fn bounding_box(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = points[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for x in points {
        for l in 0..d {
            lo[l] = lo[l].min(x[l]);
            hi[l] = hi[l].max(x[l]);
        }
    }
    (lo, hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consensus_lies_in_bounding_box(
        which in 0u8..4, ord in 0u8..3, n in 2usize..30, seed in any::<u64>(), log_alpha in -2.0f64..8.0,
    ) {
        let p = problem(which);
        let e = random_ensemble(&p, n, seed);
        let (lo, hi) = bounding_box(e.positions());
        for c in consensus_points(&e, 10f64.powf(log_alpha), order(ord)).unwrap() {
            for l in 0..c.len() {
                prop_assert!(c[l] >= lo[l] - 1e-12 && c[l] <= hi[l] + 1e-12);
            }
        }
    }

    #[test]
    fn consensus_is_permutation_equivariant(
        which in 0u8..4, n in 2usize..20, seed in any::<u64>(), shift in 1usize..19,
    ) {
        let p = problem(which);
        let e = random_ensemble(&p, n, seed);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = Ensemble::from_positions(
            &p,
            perm.iter().map(|&j| e.positions()[j].clone()).collect(),
            perm.iter().map(|&j| e.weights()[j].clone()).collect(),
        ).unwrap();
        let a = consensus_points(&e, 1e3, ScalarizationOrder::Infinity).unwrap();
        let b = consensus_points(&permuted, 1e3, ScalarizationOrder::Infinity).unwrap();
        for (k, &j) in perm.iter().enumerate() {
            for l in 0..a[j].len() {
                prop_assert!((b[k][l] - a[j][l]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn step_is_permutation_equivariant(
        which in 0u8..4, n in 2usize..20, seed in any::<u64>(), shift in 1usize..19,
    ) {
        let p = problem(which);
        let e = random_ensemble(&p, n, seed);
        let d = p.dim();
        let noise = NoiseDraw::sample(&mut rng_from_seed(seed ^ 1), n, d);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = Ensemble::from_positions(
            &p,
            perm.iter().map(|&j| e.positions()[j].clone()).collect(),
            perm.iter().map(|&j| e.weights()[j].clone()).collect(),
        ).unwrap();
        let permuted_noise = NoiseDraw::from_values(
            n,
            d,
            perm.iter().flat_map(|&j| noise.agent(j).to_vec()).collect(),
        ).unwrap();
        let mut cfg = SolverConfig::new(n, 1, 0);
        cfg.alpha = 1e3;
        let a = step_plain_with_noise(&e, &p, &cfg, &noise).unwrap();
        let b = step_plain_with_noise(&permuted, &p, &cfg, &permuted_noise).unwrap();
        for (k, &j) in perm.iter().enumerate() {
            for l in 0..d {
                prop_assert!((b.positions()[k][l] - a.positions()[j][l]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn greedy_never_increases_own_value(which in 0u8..4, ord in 0u8..3, seed in any::<u64>()) {
        let p = problem(which);
        let mut cfg = SolverConfig::new(16, 1, seed);
        cfg.p = order(ord);
        cfg.sigma = 6.0;
        let mut rng = rng_from_seed(seed);
        let mut e = random_ensemble(&p, 16, seed);
        let mut before = e.own_values(cfg.p);
        for _ in 0..30 {
            e = step_greedy(&e, &p, &cfg, &mut rng).unwrap();
            let after = e.own_values(cfg.p);
            for (a, b) in after.iter().zip(&before) {
                prop_assert!(a <= b);
            }
            before = after;
        }
    }

    #[test]
    fn noise_free_plain_steps_do_not_expand_bounding_box(which in 0u8..4, seed in any::<u64>()) {
        let p = problem(which);
        let mut cfg = SolverConfig::new(20, 1, seed);
        cfg.sigma = 0.0;
        cfg.alpha = 50.0;
        let mut e = random_ensemble(&p, 20, seed);
        let zero = NoiseDraw::zeros(20, p.dim());
        for _ in 0..20 {
            let (lo, hi) = bounding_box(e.positions());
            e = step_plain_with_noise(&e, &p, &cfg, &zero).unwrap();
            let (lo2, hi2) = bounding_box(e.positions());
            for l in 0..p.dim() {
                prop_assert!(lo2[l] >= lo[l] - 1e-12 && hi2[l] <= hi[l] + 1e-12);
            }
        }
    }

    #[test]
    fn cached_objectives_match_positions(which in 0u8..4, greedy in any::<bool>(), seed in any::<u64>()) {
        let p = problem(which);
        let mut cfg = SolverConfig::new(10, 15, seed);
        cfg.mode = if greedy { UpdateMode::Greedy } else { UpdateMode::Plain };
        let mut rng = rng_from_seed(seed);
        run(&p, &cfg, generate_uniform_weights(10, 2).unwrap(), &mut rng, |e| {
            for (x, g) in e.positions().iter().zip(e.objectives()) {
                assert!(p.domain().contains(x));
                assert_eq!(&p.eval_objectives(x).unwrap(), g);
            }
            Ok(MetricSample::default())
        }).unwrap();
    }

    #[test]
    fn parallel_equals_serial(which in 0u8..4, greedy in any::<bool>(), seed in any::<u64>()) {
        let p = problem(which);
        let weights = generate_uniform_weights(24, 2).unwrap();
        let mut cfg = SolverConfig::new(24, 10, seed);
        cfg.mode = if greedy { UpdateMode::Greedy } else { UpdateMode::Plain };
        let serial = run(&p, &cfg, weights.clone(), &mut rng_from_seed(seed), |_| Ok(MetricSample::default())).unwrap();
        cfg.parallel = true;
        let parallel = run(&p, &cfg, weights, &mut rng_from_seed(seed), |_| Ok(MetricSample::default())).unwrap();
        prop_assert_eq!(serial.positions, parallel.positions);
        prop_assert_eq!(serial.images, parallel.images);

        let e = random_ensemble(&p, 24, seed);
        prop_assert_eq!(
            consensus_points_with(&e, 1e5, ScalarizationOrder::Infinity, false).unwrap(),
            consensus_points_with(&e, 1e5, ScalarizationOrder::Infinity, true).unwrap()
        );
    }

    #[test]
    fn clipping_is_idempotent_and_lands_in_box(
        x in prop::collection::vec(-10.0f64..10.0, 3), lo in -2.0f64..0.0, width in 0.0f64..3.0,
    ) {
        let domain = BoxDomain::new(vec![lo; 3], vec![lo + width; 3]).unwrap();
        let once = clip_to_domain(&domain, &x).unwrap();
        prop_assert!(domain.contains(&once));
        prop_assert_eq!(clip_to_domain(&domain, &once).unwrap(), once.clone());
        if domain.contains(&x) {
            prop_assert_eq!(once, x);
        }
    }

    #[test]
    fn err2_is_translation_invariant_and_quadratic_in_scale(
        seed in any::<u64>(), shift in prop::collection::vec(0.0f64..0.5, 2), scale in 0.05f64..1.0,
    ) {
        let p = Problem::problem1();
        let mut rng = rng_from_seed(seed);
        let half = BoxDomain::new(vec![0.0; 2], vec![0.5; 2]).unwrap();
        let refs = sample_uniform(&half, 15, &mut rng);
        let xs = sample_uniform(&half, 15, &mut rng);
        let weights = generate_uniform_weights(15, 2).unwrap();
        let set = |pts: &[Vec<f64>]| {
            let entries = weights.iter().zip(pts).map(|(w, x): (&WeightVector, _)| ReferenceSolution {
                weight: w.clone(),
                position: x.clone(),
                image: p.eval_objectives(x).unwrap(),
            }).collect();
            ReferenceSolutionSet::new(&p, entries).unwrap()
        };
        let map = |pts: &[Vec<f64>], f: &dyn Fn(f64, usize) -> f64| -> Vec<Vec<f64>> {
            pts.iter().map(|x| x.iter().enumerate().map(|(l, &v)| f(v, l)).collect()).collect()
        };
        let base = err2(&xs, &set(&refs)).unwrap();
        let moved = err2(
            &map(&xs, &|v, l| v + shift[l]),
            &set(&map(&refs, &|v, l| v + shift[l])),
        ).unwrap();
        prop_assert!((moved - base).abs() <= 1e-12);
        let scaled = err2(&map(&xs, &|v, _| v * scale), &set(&map(&refs, &|v, _| v * scale))).unwrap();
        prop_assert!((scaled - scale * scale * base).abs() <= 1e-12);
    }
}
