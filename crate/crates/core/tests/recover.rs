use hnf_core::phasered::SlowPhaseSystem;
use hnf_core::recover::*;
use hnf_core::simkit::{integrate_slow_phase, ComplexTrajectory, RealTrajectory, Tolerance};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series(phases: Vec<Vec<f64>>, dt: f64) -> PhaseSeries {
    PhaseSeries {
        dt,
        t0: 0.0,
        phases,
        source: PhaseSource::Polar,
        omega: None,
    }
}

/// Library of `k` random columns plus a constant.
fn random_library(rows: usize, k: usize, seed: u64) -> BasisLibrary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = vec![Feature::Constant];
    features.extend((1..=k as u32).map(Feature::Drift));
    let matrix = DMatrix::from_fn(rows, k + 1, |_, j| {
        if j == 0 {
            1.0
        } else {
            rng.random_range(-1.0..1.0)
        }
    });
    BasisLibrary { features, matrix }
}

fn apply(lib: &BasisLibrary, coef: &[f64]) -> Vec<f64> {
    (0..lib.samples())
        .map(|i| (0..lib.len()).map(|j| lib.matrix[(i, j)] * coef[j]).sum())
        .collect()
}

#[test]
fn polar_phase_of_a_rotation_is_linear() {
    let tr = ComplexTrajectory {
        dt: 0.1,
        samples: (0..500)
            .map(|i| vec![Complex64::from_polar(0.5, 2.3 * 0.1 * i as f64)])
            .collect(),
        channels: 1,
    };
    let ps = extract_phase_polar(&tr).unwrap();
    assert!((fit_slopes(&ps)[0] - 2.3).abs() < 1e-12);
}

#[test]
fn vanishing_amplitude_is_reported() {
    let tr = ComplexTrajectory {
        dt: 0.1,
        samples: vec![
            vec![Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0)],
        ],
        channels: 1,
    };
    assert!(matches!(
        extract_phase_polar(&tr),
        Err(hnf_core::Error::DegenerateAmplitude { sample: 1, .. })
    ));
}

#[test]
fn peak_phase_of_a_cosine_tracks_its_frequency() {
    let w = [1.3, 2.1];
    let dt = 0.01;
    let tr = RealTrajectory {
        dt,
        samples: (0..20000)
            .map(|i| w.iter().map(|w| (w * i as f64 * dt).cos()).collect())
            .collect(),
        channels: 2,
    };
    let ps = extract_phase_peaks(&tr).unwrap();
    for (got, want) in fit_slopes(&ps).iter().zip(&w) {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn too_few_peaks_are_reported() {
    let tr = RealTrajectory {
        dt: 0.1,
        samples: (0..50).map(|i| vec![(0.1 * i as f64).cos()]).collect(),
        channels: 1,
    };
    assert!(matches!(
        extract_phase_peaks(&tr),
        Err(hnf_core::Error::InsufficientCycles { .. })
    ));
}

#[test]
fn detrending_removes_the_given_frequencies() {
    let ps = series(
        vec![(0..100).map(|i| 0.5 + 1.5 * i as f64 * 0.1).collect()],
        0.1,
    );
    let d = detrend(&ps, &[1.5]).unwrap();
    assert!(d.phases[0].iter().all(|v| (v - 0.5).abs() < 1e-12));
}

#[test]
fn projected_frequencies_satisfy_the_resonance() {
    let w = [1.0, 2.52, 1.5];
    let ps = series(
        w.iter()
            .map(|w| (0..200).map(|i| w * i as f64 * 0.1).collect())
            .collect(),
        0.1,
    );
    let omega = estimate_resonant_frequencies(&ps, &[vec![1, -1, 1]]).unwrap();
    assert!((omega[0] - omega[1] + omega[2]).abs() < 1e-12);
    assert!(estimate_resonant_frequencies(&ps, &[vec![1, -1, 1], vec![2, -2, 2]]).is_err());
}

#[test]
fn central_difference_is_exact_on_quadratics_inside() {
    let x: Vec<f64> = (0..20).map(|i| (0.5 * i as f64).powi(2)).collect();
    let d = central_difference(&x, 0.5);
    for i in 1..19 {
        assert!((d[i] - i as f64).abs() < 1e-12);
    }
}

#[test]
fn window_length_is_odd() {
    assert_eq!(window_samples(125.0, 0.05), 2501);
    assert_eq!(window_samples(1.0, 0.5), 3);
    assert!(savitzky_golay(&[1.0; 10], 4, 1).is_err());
}

#[test]
fn standard_combos_counts_and_shapes() {
    for n in 2..6 {
        let c = standard_combos(n);
        let pairs = n * (n - 1) / 2;
        let triplets = n * (n - 1) * n / 2;
        assert_eq!(c.len(), n + pairs + triplets, "n = {n}");
        for m in &c[n + pairs..] {
            assert_eq!(m.iter().sum::<i64>(), 1);
        }
    }
}

#[test]
fn library_layout_and_stacking() {
    let ps = series(vec![vec![0.0, 1.0, 2.0], vec![0.5, 0.5, 0.5]], 1.0);
    let lib = build_library(&ps, &[vec![1, -1]], 2).unwrap();
    assert_eq!(lib.len(), 5);
    assert_eq!(lib.features[1], Feature::Drift(1));
    assert!((lib.matrix[(2, 2)] - 4.0).abs() < 1e-15);
    assert!((lib.matrix[(2, 3)] - 1.5f64.sin()).abs() < 1e-15);
    let both = BasisLibrary::stack(&[lib.clone(), lib.rows(1..3)]).unwrap();
    assert_eq!(both.samples(), 5);
    assert_eq!(both.matrix.row(4), lib.matrix.row(2));
    assert!(build_library(&ps, &[vec![1, 0], vec![1, 0]], 0).is_err());
    let other = build_library(&ps, &[vec![0, 1]], 2).unwrap();
    assert!(BasisLibrary::stack(&[lib, other]).is_err());
}

#[test]
fn feature_names_are_readable() {
    assert_eq!(
        Feature::Sin(vec![1, -2, 1, 0]).to_string(),
        "sin(x1-2x2+x3)"
    );
    assert_eq!(
        Feature::Cos(vec![-2, 1, 0, 1]).to_string(),
        "cos(-2x1+x2+x4)"
    );
    assert_eq!(Feature::Drift(2).to_string(), "t^2");
}

#[test]
fn lasso_without_penalty_is_least_squares() {
    let lib = random_library(200, 4, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let y: Vec<f64> = apply(&lib, &[0.3, 1.0, -2.0, 0.5, 0.1])
        .iter()
        .map(|v| v + 0.01 * rng.random_range(-1.0..1.0))
        .collect();
    let a = ols(&lib, &y).unwrap();
    let b = lasso(
        &lib,
        &y,
        0.0,
        &LassoOptions {
            debias: false,
            tol: 1e-12,
            ..LassoOptions::default()
        },
    )
    .unwrap();
    for (x, z) in a.coefficients.iter().zip(&b.coefficients) {
        assert!((x - z).abs() < 1e-8, "{x} vs {z}");
    }
}

#[test]
fn lasso_above_lambda_max_keeps_only_the_intercept() {
    let lib = random_library(100, 3, 3);
    let y = apply(&lib, &[1.0, 0.4, -0.2, 0.0]);
    for standardize in [true, false] {
        let opts = LassoOptions {
            standardize,
            ..LassoOptions::default()
        };
        let lmax = lasso_lambda_max(&lib, &y, &opts);
        let fit = lasso(&lib, &y, lmax * 1.001, &opts).unwrap();
        assert_eq!(fit.support_features(), vec![&Feature::Constant]);
        let fit = lasso(&lib, &y, lmax * 0.9, &opts).unwrap();
        assert!(fit.support.len() > 1);
    }
}

#[test]
fn automatic_lasso_finds_a_sparse_truth() {
    let lib = random_library(400, 6, 5);
    let truth = [0.5, 0.0, 1.2, 0.0, 0.0, -0.7, 0.0];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let y: Vec<f64> = apply(&lib, &truth)
        .iter()
        .map(|v| v + 0.01 * rng.random_range(-1.0..1.0))
        .collect();
    let fit = lasso_auto(&lib, &y, 1.2, &LassoOptions::default()).unwrap();
    assert_eq!(fit.support, vec![0, 2, 5]);
    for j in [0, 2, 5] {
        assert!((fit.coefficients[j] - truth[j]).abs() < 0.01);
    }
}

#[test]
fn stlsq_recovers_exact_sparse_coefficients() {
    let lib = random_library(100, 5, 7);
    let truth = [0.01, 0.0, 0.002, 0.0, -0.003, 0.0];
    let y = apply(&lib, &truth);
    let fit = stlsq(&lib, &y, 1e-3).unwrap();
    assert_eq!(fit.support, vec![0, 2, 4]);
    for (a, b) in fit.coefficients.iter().zip(&truth) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn triplet_amplitude_combines_sine_and_cosine() {
    let m = vec![1, -1, 1];
    let fit = FitResult {
        features: vec![
            Feature::Constant,
            Feature::Sin(m.clone()),
            Feature::Cos(m.clone()),
        ],
        coefficients: vec![1.0, 3.0, -4.0],
        support: vec![0, 1, 2],
        mse: 0.0,
        penalty: None,
    };
    assert!((triplet_amplitude(&fit, &m) - 5.0).abs() < 1e-15);
    assert_eq!(triplet_amplitude(&fit, &[0, 1, 0]), 0.0);
    assert_eq!(triplet_amplitudes(&[fit], &[m]), vec![vec![5.0]]);
}

#[test]
fn golden_section_finds_the_minimum() {
    let (x, fx) = golden_section(|x| (x - 1.3).powi(2) + 2.0, -3.0, 4.0, 1e-9);
    assert!((x - 1.3).abs() < 1e-6 && (fx - 2.0).abs() < 1e-12);
}

#[test]
fn per_cycle_error_of_a_constant_offset() {
    let data: Vec<f64> = (0..1000).map(|i| 0.02 * i as f64).collect();
    let pred: Vec<f64> = data.iter().map(|d| d + 0.1).collect();
    let errs = per_cycle_error(&data, &pred);
    assert_eq!(errs.len(), 3);
    assert!(errs
        .iter()
        .all(|e| (e - 0.1 / std::f64::consts::TAU).abs() < 1e-12));
    assert!(per_cycle_error(&data, &data).iter().all(|&e| e == 0.0));
}

#[test]
fn slow_phase_fit_recovers_a_known_field() {
    let truth = SlowPhaseSystem::new(
        vec![vec![1, -1, 1, 0], vec![1, 0, 1, -1]],
        vec![0.01, -0.015],
        vec![vec![-0.006, 0.002], vec![0.001, 0.004]],
        vec![vec![0.001, 0.0], vec![-0.002, 0.003]],
    )
    .unwrap();
    let dt = 0.5;
    let tr = integrate_slow_phase(&truth, &[0.4, -1.0], 3000.0, dt, Tolerance::default()).unwrap();
    let phi: Vec<Vec<f64>> = (0..2).map(|j| tr.channel(j)).collect();
    let fit = fit_slow_phase(&phi, dt, &truth.combos, &SlowFitOptions::default()).unwrap();
    for i in 0..2 {
        for (a, b) in fit
            .system
            .row_parameters(i)
            .iter()
            .zip(truth.row_parameters(i))
        {
            assert!((a - b).abs() < 2e-5, "row {i}: {a} vs {b}");
        }
        let worst = per_cycle_error(&phi[i], &fit.predicted[i])
            .into_iter()
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
    }
}

proptest! {
    #[test]
    fn savitzky_golay_keeps_low_degree_polynomials(
        c in proptest::collection::vec(-2.0f64..2.0, 3),
        half in 1usize..8,
        len in 20usize..60,
    ) {
        let x: Vec<f64> = (0..len).map(|i| {
            let t = i as f64 * 0.1;
            c[0] + c[1] * t + c[2] * t * t
        }).collect();
        let y = savitzky_golay(&x, 2 * half + 1, 2).unwrap();
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let lin: Vec<f64> = (0..len).map(|i| c[0] + c[1] * i as f64).collect();
        let z = savitzky_golay(&lin, 2 * half + 1, 1).unwrap();
        for (a, b) in lin.iter().zip(&z) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn lasso_solutions_satisfy_optimality(seed in 0u64..1000, frac in 0.01f64..0.9) {
        let lib = random_library(80, 4, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1);
        let coef: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = apply(&lib, &coef).iter().map(|v| v + 0.1 * rng.random_range(-1.0..1.0)).collect();
        let opts = LassoOptions { debias: false, tol: 1e-12, ..LassoOptions::default() };
        let penalty = frac * lasso_lambda_max(&lib, &y, &opts);
        prop_assert!(lasso_kkt_violation(&lib, &y, penalty, &opts).unwrap() < 1e-6);
    }
}
