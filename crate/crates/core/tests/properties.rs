mod common;

use common::*;
use geneig::feasible::{ConvexSet, FeasibleSet};
use geneig::linalg::{cholesky, gen_eig, SymMatrix};
use geneig::smoothing::{inexact_gradient, smooth_gradient, smooth_value};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pencil_case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=7, 1usize..=4)
}

fn feasible_set() -> impl Strategy<Value = FeasibleSet> {
    (1usize..=6)
        .prop_flat_map(|m| (prop::collection::vec(0.2f64..3.0, m), 0.0f64..0.3, 0.05f64..2.0))
        .prop_map(|(l, xmin, slack)| {
            let total: f64 = l.iter().sum();
            FeasibleSet::new(l, total * (xmin + slack), xmin).unwrap()
        })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gen_eig_matches_oracle((seed, n, _m) in pencil_case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_sym(&mut rng, n, 2.0);
        let mut y = random_psd(&mut rng, n, n, 1.0);
        for i in 0..n {
            y.add_at(i, i, 0.2);
        }
        let d = gen_eig(&x, &y).unwrap();
        let oracle = oracle_gen_eigs(&x, &y);
        let scale = oracle.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        for (a, b) in d.values().iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
        prop_assert!(d.values().windows(2).all(|w| w[0] >= w[1]));
        for i in 0..n {
            let v = d.vector(i);
            let r: f64 = x.mul_vec(v).iter().zip(y.mul_vec(v)).map(|(a, b)| (a - d.values()[i] * b).powi(2)).sum();
            prop_assert!(r.sqrt() <= 1e-9 * scale);
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((y.bilinear(v, d.vector(j)) - expect).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_reconstructs((seed, n, _m) in pencil_case()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut y = random_psd(&mut rng, n, n, 1.0);
        for i in 0..n {
            y.add_at(i, i, 0.1);
        }
        let c = cholesky(&y).unwrap();
        for i in 0..n {
            for j in 0..n {
                let v: f64 = (0..n).map(|k| c.get(i, k) * c.get(j, k)).sum();
                prop_assert!((v - y.get(i, j)).abs() <= 1e-12 * (1.0 + y.max_abs_diag()));
            }
        }
    }

    #[test]
    fn smoothing_is_sandwiched_and_monotone_in_mu((seed, n, m) in pencil_case(), mu in 1e-3f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_pencil(&mut rng, n, m);
        let x = random_point(&mut rng, m);
        let lam = p.lambda_max(&x).unwrap();
        let v = smooth_value(&p, &x, mu).unwrap();
        prop_assert!(v - lam >= -1e-12);
        prop_assert!(v - lam <= mu * (n as f64).ln() + 1e-12);
        prop_assert!(smooth_value(&p, &x, 2.0 * mu).unwrap() >= v - 1e-12);
        prop_assert!((lam - oracle_spectrum(&p, &x)[0]).abs() <= 1e-10 * lam.abs().max(1.0));
    }

    #[test]
    fn gradient_matches_central_differences((seed, n, m) in pencil_case(), mu in 1e-2f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_pencil(&mut rng, n, m);
        let x = random_point(&mut rng, m);
        let g = smooth_gradient(&p, &x, mu).unwrap();
        let h = 1e-6;
        for e in 0..m {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[e] += h;
            xm[e] -= h;
            let fd = (smooth_value(&p, &xp, mu).unwrap() - smooth_value(&p, &xm, mu).unwrap()) / (2.0 * h);
            prop_assert!((g[e] - fd).abs() <= 1e-5 * (1.0 + g[e].abs()), "{} vs {fd}", g[e]);
        }
        prop_assert_eq!(inexact_gradient(&p, &x, mu, n).unwrap(), g);
    }

    #[test]
    fn projection_is_feasible_idempotent_and_optimal(s in feasible_set(), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-2.0..4.0)).collect();
        let p = s.project(&y);
        prop_assert!(s.contains(&p, 1e-10));
        let pp = s.project(&p);
        prop_assert!(dist(&p, &pp) <= 1e-12 * (1.0 + s.volume()));
        let d = dist(&p, &y);
        for _ in 0..100 {
            let z = s.sample(&mut rng);
            prop_assert!(s.contains(&z, 1e-10));
            prop_assert!(d <= dist(&z, &y) + 1e-10);
        }
    }

    #[test]
    fn projection_is_nonexpansive(s in feasible_set(), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-2.0..4.0)).collect();
        let b: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-2.0..4.0)).collect();
        prop_assert!(dist(&s.project(&a), &s.project(&b)) <= dist(&a, &b) + 1e-10);
    }

    #[test]
    fn linear_min_is_attained_by_a_vertex(s in feasible_set(), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = s.linear_min(&c);
        for _ in 0..200 {
            let z = s.sample(&mut rng);
            prop_assert!(v <= z.iter().zip(&c).map(|(z, c)| z * c).sum::<f64>() + 1e-10);
        }
        // Vertices: everything at x_min, or one member takes the spare volume.
        let xmin = s.x_min();
        let base: f64 = c.iter().map(|c| c * xmin).sum();
        let best = (0..s.dim())
            .map(|e| base + c[e] * (s.upper(e) - xmin))
            .fold(base, f64::min);
        prop_assert!((v - best).abs() <= 1e-10 * (1.0 + best.abs()));
    }

    #[test]
    fn diameter_bound_covers_samples(s in feasible_set(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = s.diameter_sq();
        for _ in 0..50 {
            let (a, b) = (s.sample(&mut rng), s.sample(&mut rng));
            prop_assert!(dist(&a, &b).powi(2) <= bound + 1e-10);
        }
    }
}

#[test]
fn diameter_examples() {
    assert_eq!(FeasibleSet::new(vec![1.0], 1.0, 0.0).unwrap().diameter_sq(), 1.0);
    assert_eq!(FeasibleSet::new(vec![1.0, 1.0], 1.0, 0.0).unwrap().diameter_sq(), 2.0);
    assert_eq!(FeasibleSet::new(vec![1.0, 2.0], 3.0, 1.0).unwrap().diameter_sq(), 0.0);
}

#[test]
fn sym_matrix_rejects_asymmetry() {
    let rows = vec![vec![1.0, 2.0], vec![2.0 + 1e-6, 1.0]];
    assert!(SymMatrix::from_rows(&rows, 1e-12).is_err());
}
