mod common;

use common::{brute_slope_prox, slope_value};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smop::regularizer::WeightSchedule;
use smop::{Regularizer, SparseMatrix};

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w[0] = w[0].max(0.1);
    w
}

#[test]
fn slope_prox_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let n = 1 + trial % 6;
        let w = random_weights(&mut rng, n);
        let t = rng.random_range(0.05..2.0);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        if trial % 7 == 0 && n > 1 {
            // exact magnitude ties
            v[1] = -v[0];
        }
        let reg = Regularizer::sorted_l1(w.clone()).unwrap();
        let z = reg.prox(&v, t).unwrap();
        let oracle = brute_slope_prox(&v, t, &w);
        let dev = z.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        assert!(dev <= 1e-8, "trial {trial}: v = {v:?}, w = {w:?}, t = {t}: {z:?} vs {oracle:?}");
    }
    println!("sorted-l1 prox oracle: max deviation {worst:e}");
}

#[test]
fn prox_examples() {
    let l1 = Regularizer::L1;
    assert_eq!(l1.prox(&[3.0, -0.5, 1.0], 1.0).unwrap(), vec![2.0, 0.0, 0.0]);
    let s = Regularizer::sorted_l1(vec![2.0, 1.0]).unwrap();
    let z = s.prox(&[3.0, 1.0], 1.0).unwrap();
    assert_eq!(z, vec![1.0, 0.0]);
    let s = Regularizer::sorted_l1(vec![1.0, 0.5]).unwrap();
    let z = s.prox(&[-2.9, 3.0], 1.0).unwrap();
    assert!((z[0] + 2.2).abs() < 1e-12 && (z[1] - 2.2).abs() < 1e-12, "{z:?}");
    assert!(l1.prox(&[1.0], 0.0).is_err());
}

/// Polar gauge by direct maximization of `⟨z, x⟩` over a fine angular grid
/// of the unit sphere `{x : p(x) = 1}` in two dimensions.
fn grid_polar_2d(z: [f64; 2], value: impl Fn(&[f64]) -> f64) -> f64 {
    let steps = 200_000;
    (0..steps)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let d = [th.cos(), th.sin()];
            let p = value(&d);
            (z[0] * d[0] + z[1] * d[1]) / p
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn polar_matches_grid_oracle_in_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let w = random_weights(&mut rng, 2);
        let z = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let reg = Regularizer::sorted_l1(w.clone()).unwrap();
        let got = reg.polar(&z).unwrap();
        let want = grid_polar_2d(z, |x| slope_value(x, &w));
        assert!((got - want).abs() <= 1e-4 * (1.0 + want), "{z:?} {w:?}: {got} vs {want}");
        let got = Regularizer::L1.polar(&z).unwrap();
        let want = grid_polar_2d(z, |x| x.iter().map(|v| v.abs()).sum());
        assert!((got - want).abs() <= 1e-4 * (1.0 + want));
    }
}

#[test]
fn polar_examples() {
    let s = Regularizer::sorted_l1(vec![2.0, 1.0]).unwrap();
    assert!((s.polar(&[3.0, 3.0]).unwrap() - 2.0).abs() < 1e-15);
    assert_eq!(Regularizer::L1.polar(&[1.0, -4.0, 2.0]).unwrap(), 4.0);
    let a = SparseMatrix::identity(2);
    assert_eq!(Regularizer::L1.lambda_inf(&a, &[1.0, -3.0]).unwrap(), 3.0);
    assert!(Regularizer::L1.lambda_inf(&a, &[0.0, 0.0]).is_err());
}

#[test]
fn weight_schedules() {
    assert_eq!(WeightSchedule::Linear.weights(3), vec![1.0, 0.5, 0.0]);
    assert_eq!(WeightSchedule::Constant.weights(2), vec![1.0, 1.0]);
    assert!(Regularizer::sorted_l1(vec![1.0, 2.0]).is_err());
    assert!(Regularizer::sorted_l1(vec![1.0, -0.5]).is_err());
}

fn reg_strategy() -> impl Strategy<Value = (Regularizer, usize)> {
    (1usize..=6).prop_flat_map(|n| {
        prop_oneof![
            Just((Regularizer::L1, n)),
            prop::collection::vec(0.0..2.0f64, n).prop_map(move |mut w| {
                w.sort_by(|a, b| b.total_cmp(a));
                w[0] = w[0].max(0.1);
                (Regularizer::sorted_l1(w).unwrap(), n)
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prox_beats_random_perturbations(
        (reg, n) in reg_strategy(),
        vs in prop::collection::vec(-3.0..3.0f64, 6),
        t in 0.05..2.0f64,
        seed in any::<u64>(),
    ) {
        let v = &vs[..n];
        let z = reg.prox(v, t).unwrap();
        let obj = |x: &[f64]| {
            t * reg.value(x).unwrap() + 0.5 * x.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
        };
        let base = obj(&z);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            let r = rng.random_range(0.0..0.1) / norm;
            let zp: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a + r * b).collect();
            prop_assert!(base <= obj(&zp) + 1e-12);
        }
    }

    #[test]
    fn prox_scales_with_positive_factor(
        (reg, n) in reg_strategy(),
        vs in prop::collection::vec(-3.0..3.0f64, 6),
        t in 0.05..2.0f64,
        alpha in 0.1..10.0f64,
    ) {
        let v = &vs[..n];
        let z = reg.prox(v, t).unwrap();
        let av: Vec<f64> = v.iter().map(|x| alpha * x).collect();
        let za = reg.prox(&av, alpha * t).unwrap();
        for (a, b) in za.iter().zip(&z) {
            prop_assert!((a - alpha * b).abs() <= 1e-12 * (1.0 + alpha * b.abs()) * 10.0);
        }
    }

    #[test]
    fn slope_prox_keeps_order_and_sign(
        (reg, n) in reg_strategy(),
        vs in prop::collection::vec(-3.0..3.0f64, 6),
        t in 0.05..2.0f64,
    ) {
        let v = &vs[..n];
        let z = reg.prox(v, t).unwrap();
        for i in 0..n {
            prop_assert!(z[i] == 0.0 || z[i].signum() == v[i].signum());
            for j in 0..n {
                if v[i].abs() >= v[j].abs() {
                    prop_assert!(z[i].abs() >= z[j].abs() - 1e-12);
                }
            }
        }
    }

    #[test]
    fn polar_is_a_positively_homogeneous_dual_gauge(
        (reg, n) in reg_strategy(),
        zs in prop::collection::vec(-3.0..3.0f64, 6),
        xs in prop::collection::vec(-3.0..3.0f64, 6),
        alpha in 0.0..10.0f64,
    ) {
        let z = &zs[..n];
        let x = &xs[..n];
        let pz = reg.polar(z).unwrap();
        let az: Vec<f64> = z.iter().map(|v| alpha * v).collect();
        prop_assert!((reg.polar(&az).unwrap() - alpha * pz).abs() <= 1e-12 * (1.0 + alpha * pz));
        prop_assert_eq!(pz == 0.0, z.iter().all(|v| *v == 0.0));
        let ip: f64 = z.iter().zip(x).map(|(a, b)| a * b).sum();
        prop_assert!(ip <= pz * reg.value(x).unwrap() + 1e-12);
        prop_assert_eq!(reg.polar(&vec![0.0; n]).unwrap(), 0.0);
    }
}
