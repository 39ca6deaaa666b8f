mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turnpike_core::certify::{
    check_cost_optimality, check_terminal, check_turnpike, euler_lagrange_residual,
    perturbation_from_interior,
};
use turnpike_core::explicit::{
    finite_horizon_control, hum_control, infinite_horizon_control, optimal_control,
    weight_from_lambda, ControlSignal,
};
use turnpike_core::modal::{modal_roots, solve_mode_bvp, ModeSpec};
use turnpike_core::oracle::oracle_solution;
use turnpike_core::wavecore::{
    build_f, energy, evaluate_state, propagate_alpha, GridFunction, Horizon, InitialData,
};

use common::{max_abs_diff, random_smooth};

fn random_control(horizon: Horizon, m: usize, seed: u64) -> ControlSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let windows = (0..horizon.windows())
        .map(|k| {
            let vals = (0..2 * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            GridFunction::new(2.0 * k as f64, 2.0 * k as f64 + 2.0, vals).unwrap()
        })
        .collect();
    ControlSignal::new(windows, horizon).unwrap()
}

#[test]
fn window_shift_is_exact() {
    for seed in 0..5 {
        let d = random_smooth(24, seed);
        let u = random_control(Horizon::Finite { n: 6 }, 24, seed + 100);
        let alpha = propagate_alpha(&build_f(&d).unwrap(), &u).unwrap();
        let scale = alpha.window(0).max_abs().max(u.max_abs());
        for k in 0..6 {
            let (a, b, c) = (alpha.window(k).values(), alpha.window(k + 1).values(), u.window(k).values());
            for j in 0..a.len() {
                assert!((b[j] + a[j] - c[j]).abs() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn zero_control_alternates_and_conserves_energy() {
    let d = random_smooth(32, 3);
    let f = build_f(&d).unwrap();
    let u = ControlSignal::zeros(Horizon::Finite { n: 5 }, 32).unwrap();
    let alpha = propagate_alpha(&f, &u).unwrap();
    for k in 0..=5 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (a, b) in alpha.window(k).values().iter().zip(f.values()) {
            assert_eq!(*a, sign * b);
        }
    }
    let e0 = energy(&alpha, 0.0).unwrap();
    for p in 0..=(10 * 32) {
        let e = energy(&alpha, p as f64 / 32.0).unwrap();
        assert!((e - e0).abs() <= 1e-12 * e0);
    }
}

#[test]
fn state_round_trip_and_energy_identity() {
    let d = random_smooth(40, 11);
    let w = weight_from_lambda(0.7).unwrap();
    let u = finite_horizon_control(&d, &w, 8.0).unwrap();
    let alpha = propagate_alpha(&build_f(&d).unwrap(), &u).unwrap();

    let s0 = evaluate_state(&alpha, 0.0).unwrap();
    let back = InitialData::new(s0.y.clone(), s0.yt.clone(), Some(s0.yx.clone())).unwrap();
    let f = build_f(&back).unwrap();
    let scale = alpha.window(0).max_abs();
    assert!(max_abs_diff(f.values(), alpha.window(0).values()) <= 1e-12 * scale);

    for p in [0, 7, 40, 123, 320] {
        let t = p as f64 / 40.0;
        let snap = evaluate_state(&alpha, t).unwrap();
        let e = energy(&alpha, t).unwrap();
        assert!((snap.energy() - e).abs() <= 1e-12 * energy(&alpha, 0.0).unwrap());
    }
}

#[test]
fn finite_horizon_approaches_infinite_horizon() {
    let d = InitialData::sine(32).unwrap();
    let f_max = build_f(&d).unwrap().max_abs();
    for lambda in [0.5, 0.96, 0.99] {
        let w = weight_from_lambda(lambda).unwrap();
        let z = w.z();
        for n in [5usize, 10, 20] {
            let fin = finite_horizon_control(&d, &w, 2.0 * n as f64).unwrap();
            let inf = infinite_horizon_control(&d, &w, Some(n)).unwrap();
            let c = 2.0 * (1.0 + z) / (1.0 - z.powi(2 * n as i32));
            for k in 0..n.min(4) {
                let diff = max_abs_diff(fin.window(k).values(), inf.window(k).values());
                let envelope = c * z.abs().powi((2 * n - 1 - k) as i32) * f_max;
                assert!(diff <= envelope * (1.0 + 1e-9) + 1e-15, "λ = {lambda}, n = {n}, k = {k}");
            }
        }
    }
}

#[test]
fn minimal_norm_control_is_four_periodic() {
    let d = random_smooth(16, 5);
    let u = hum_control(&d, 12.0).unwrap();
    for k in 0..4 {
        assert_eq!(u.window(k + 2).values(), u.window(k).values());
    }
}

#[test]
fn optimum_beats_random_admissible_perturbations() {
    let d = random_smooth(32, 21);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for lambda in [0.0, 0.3, 0.96] {
        let horizon = Horizon::Finite { n: 5 };
        let w = weight_from_lambda(lambda).unwrap();
        let u = optimal_control(&d, &w, horizon).unwrap();
        let mut perts = Vec::new();
        // Differences of exact controls.
        for other in [0.1, 0.5, 0.8, 0.99, 1.0] {
            if other == lambda {
                continue;
            }
            let v = optimal_control(&d, &weight_from_lambda(other).unwrap(), horizon).unwrap();
            perts.push(v.zip_with(&u, |a, b| a - b).unwrap());
        }
        // Random interior α′ profiles.
        for _ in 0..8 {
            let amp: f64 = rng.gen_range(0.01..2.0);
            let interior: Vec<GridFunction> = (0..4)
                .map(|_| {
                    let (p, q): (f64, f64) = (rng.gen_range(0.5..4.0), rng.gen_range(0.0..6.0));
                    GridFunction::from_fn(0.0, 2.0, 64, |s| amp * (p * s + q).sin()).unwrap()
                })
                .collect();
            perts.push(perturbation_from_interior(&interior, horizon).unwrap());
        }
        assert!(perts.len() >= 10);
        let r = check_cost_optimality(&d, &u, lambda, &perts, 1e-12).unwrap();
        assert!(r.pass, "λ = {lambda}: {:?}", r.details);
        assert_eq!(r.detail("perturbations_inadmissible"), Some(0.0));
        assert!(r.detail("min_relative_increase").unwrap() >= 1e-12);
    }
}

#[test]
fn oracle_agrees_across_the_full_sweep() {
    for (name, d) in [("sine", InitialData::sine(128).unwrap()), ("random", random_smooth(128, 8))] {
        for lambda in [0.0, 0.5, 0.96, 0.99, 1.0] {
            for t in [2.0, 4.0, 8.0, 20.0] {
                let w = weight_from_lambda(lambda).unwrap();
                let closed = optimal_control(&d, &w, Horizon::finite(t).unwrap()).unwrap();
                let sol = oracle_solution(&d, lambda, t).unwrap();
                let dev = sol.control.zip_with(&closed, |a, b| a - b).unwrap().max_abs();
                assert!(dev <= 1e-9 * closed.norm(), "{name}, λ = {lambda}, T = {t}: {dev:e}");
                let alpha = propagate_alpha(&build_f(&d).unwrap(), &sol.control).unwrap();
                assert!(check_terminal(&alpha, t, 1e-9).unwrap().pass);
            }
        }
    }
}

#[test]
fn certificate_reports_are_deterministic() {
    let run = || {
        let d = random_smooth(64, 4);
        let w = weight_from_lambda(0.96).unwrap();
        let u = finite_horizon_control(&d, &w, 10.0).unwrap();
        let alpha = propagate_alpha(&build_f(&d).unwrap(), &u).unwrap();
        let reports = vec![
            check_terminal(&alpha, 10.0, 1e-10).unwrap(),
            euler_lagrange_residual(&alpha, 0.96, 1e-10).unwrap(),
            check_turnpike(&alpha, &w, 10.0, None, 1e-10).unwrap(),
        ];
        serde_json::to_string(&reports).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn modal_root_split_for_random_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let omega: f64 = 0.8;
    for _ in 0..200 {
        let lambda: f64 = rng.gen_range(0.05..0.95);
        let b = rng.gen_range(omega * omega..5.0);
        let a_im = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(-20.0..20.0) };
        let mode = ModeSpec::new(a_im, b, lambda, Complex64::new(1.0, -0.5)).unwrap();
        let (p, m) = modal_roots(&mode).unwrap();
        assert!(p.re > 0.0 && m.re < 0.0);
        // Purely imaginary a leaves real parts ±√((1 − λ)b/λ).
        let eff = ((1.0 - lambda) / lambda * b).sqrt();
        assert!((p.re - eff).abs() <= 1e-9 * eff && (m.re + eff).abs() <= 1e-9 * eff);
        if a_im == 0.0 && lambda <= 0.5 {
            assert!(p.re >= omega && m.re <= -omega);
        }
        let sol = solve_mode_bvp(&mode, rng.gen_range(0.5..15.0)).unwrap();
        assert!(sol.bvp_residual <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_hold_at_any_resolution(
        m in 2usize..48,
        lambda in 0.0f64..1.0,
        n in 1usize..8,
        seed in 0u64..1000,
    ) {
        let d = random_smooth(m, seed);
        let t = 2.0 * n as f64;
        let w = weight_from_lambda(lambda).unwrap();
        let u = optimal_control(&d, &w, Horizon::Finite { n }).unwrap();
        let alpha = propagate_alpha(&build_f(&d).unwrap(), &u).unwrap();
        prop_assert!(check_terminal(&alpha, t, 1e-10).unwrap().pass);
        prop_assert!(check_turnpike(&alpha, &w, t, None, 1e-10).unwrap().pass);
        if n >= 2 {
            prop_assert!(euler_lagrange_residual(&alpha, lambda, 1e-10).unwrap().pass);
        }
    }
}
