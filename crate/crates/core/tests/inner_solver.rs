mod common;

use common::{dot, lasso_cd, norm, random_dataset};
use proptest::prelude::*;
use smop::inner::{eta_l, objective, phi_eval, solve_reduced};
use smop::regularizer::WeightSchedule;
use smop::{InnerConfig, Regularizer, SieveConfig};

fn regs(n: usize) -> Vec<Regularizer> {
    vec![
        Regularizer::L1,
        Regularizer::slope(WeightSchedule::Linear, n).unwrap(),
    ]
}

#[test]
fn matches_coordinate_descent_oracle() {
    for seed in 0..6 {
        let ds = random_dataset(15, 25, 0.5, seed);
        let li = Regularizer::L1.lambda_inf(&ds.a, &ds.b).unwrap();
        for frac in [0.05, 0.3, 0.8] {
            let lam = frac * li;
            let cfg = InnerConfig::with_tol(1e-11);
            let all: Vec<usize> = (0..25).collect();
            let got = solve_reduced(ds.ls(), &Regularizer::L1, lam, &all, None, &cfg).unwrap();
            let want = lasso_cd(&ds.a, &ds.b, lam, 1e-14);
            let fo = objective(ds.ls(), &Regularizer::L1, lam, &want).unwrap();
            assert!(got.converged);
            assert!((got.objective - fo).abs() <= 1e-9 * (1.0 + fo), "seed {seed}: {} vs {fo}", got.objective);
            let y_want = ds.ls().residual(&want);
            let dy: Vec<f64> = got.y.iter().zip(&y_want).map(|(a, b)| a - b).collect();
            assert!(norm(&dy) <= 1e-7, "seed {seed} frac {frac}: {}", norm(&dy));
        }
    }
}

#[test]
fn zero_solution_at_and_above_lambda_inf() {
    for seed in 0..4 {
        let ds = random_dataset(10, 30, 0.4, seed);
        for reg in regs(30) {
            let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
            for mult in [1.0, 1.5, 10.0] {
                let r = phi_eval(ds.ls(), &reg, mult * li, None, &InnerConfig::default(), None).unwrap();
                assert!(r.x.iter().all(|v| *v == 0.0), "{} at {mult}", reg.name());
                assert_eq!(r.phi, norm(&ds.b));
            }
        }
    }
}

#[test]
fn value_function_is_monotone_on_grids() {
    let eps = 1e-9;
    for seed in 0..5 {
        let ds = random_dataset(20, 60, 0.3, 100 + seed);
        for reg in regs(60) {
            let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
            let cfg = InnerConfig::with_tol(eps);
            let sc = SieveConfig::with_eps(eps);
            let phis: Vec<f64> = (1..=10)
                .map(|i| {
                    let lam = li * i as f64 / 10.0;
                    phi_eval(ds.ls(), &reg, lam, None, &cfg, Some(&sc)).unwrap().phi
                })
                .collect();
            for w in phis.windows(2) {
                assert!(w[1] >= w[0] - 10.0 * eps, "{} seed {seed}: {phis:?}", reg.name());
            }
            // strictly increasing below lambda_inf
            for w in phis[..9].windows(2) {
                assert!(w[1] > w[0], "{} seed {seed}: {phis:?}", reg.name());
            }
        }
    }
}

#[test]
fn gauge_kkt_and_certified_residual_at_convergence() {
    let eps = 1e-9;
    for seed in 0..5 {
        let ds = random_dataset(25, 80, 0.3, 200 + seed);
        for reg in regs(80) {
            let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
            for frac in [0.02, 0.2, 0.7] {
                let lam = frac * li;
                let r = phi_eval(
                    ds.ls(),
                    &reg,
                    lam,
                    None,
                    &InnerConfig::with_tol(eps),
                    Some(&SieveConfig::with_eps(eps)),
                )
                .unwrap();
                assert!(r.converged);
                let y = ds.ls().residual(&r.x);
                let aty = ds.a.rmatvec(&y).unwrap();
                let pv = reg.value(&r.x).unwrap();
                assert!(reg.polar(&aty).unwrap() <= lam * (1.0 + 1e-6), "{} {seed} {frac}", reg.name());
                assert!((dot(&r.x, &aty) - lam * pv).abs() <= 1e-6 * (1.0 + lam * pv));
                assert!(eta_l(&r.x, ds.ls(), &reg, lam).unwrap() <= 10.0 * eps);
            }
        }
    }
}

#[test]
fn residual_is_unique_across_warm_starts() {
    let eps = 1e-10;
    for seed in 0..4 {
        // more columns than rows: the minimizer need not be unique
        let ds = random_dataset(12, 40, 0.5, 300 + seed);
        for reg in regs(40) {
            let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
            let lam = 0.1 * li;
            let cfg = InnerConfig::with_tol(eps);
            let cold = phi_eval(ds.ls(), &reg, lam, None, &cfg, None).unwrap();
            let start: Vec<f64> = (0..40).map(|j| ((j * 7 % 11) as f64 - 5.0) * 0.3).collect();
            let warm = phi_eval(ds.ls(), &reg, lam, Some(&start), &cfg, None).unwrap();
            let dy: Vec<f64> = cold.y.iter().zip(&warm.y).map(|(a, b)| a - b).collect();
            assert!(norm(&dy) <= 100.0 * eps, "{} seed {seed}: {}", reg.name(), norm(&dy));
        }
    }
}

#[test]
fn objective_trace_is_nonincreasing() {
    let ds = random_dataset(30, 50, 0.4, 9);
    for reg in regs(50) {
        let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
        let mut cfg = InnerConfig::with_tol(1e-10);
        cfg.trace = true;
        let all: Vec<usize> = (0..50).collect();
        let r = solve_reduced(ds.ls(), &reg, 0.05 * li, &all, None, &cfg).unwrap();
        assert!(r.trace.len() > 3);
        for w in r.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-12 * (1.0 + w[0].objective.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_solves_on_random_instances(
        seed in 0u64..10_000,
        frac in 0.01..0.99f64,
        slope in any::<bool>(),
    ) {
        let ds = random_dataset(10, 20, 0.5, seed);
        let reg = if slope { regs(20).remove(1) } else { Regularizer::L1 };
        let li = reg.lambda_inf(&ds.a, &ds.b).unwrap();
        let eps = 1e-9;
        let r = phi_eval(ds.ls(), &reg, frac * li, None, &InnerConfig::with_tol(eps), Some(&SieveConfig::with_eps(eps))).unwrap();
        prop_assert!(r.converged);
        prop_assert!(eta_l(&r.x, ds.ls(), &reg, frac * li).unwrap() <= 10.0 * eps);
        prop_assert!(r.phi <= norm(&ds.b) + 1e-12);
    }
}
