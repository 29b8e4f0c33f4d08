use hnf_core::phasered::{MeanFieldSpec, SlowPhaseSystem};
use hnf_core::presets;
use hnf_core::simkit::*;
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

#[test]
fn uncoupled_node_settles_on_its_limit_cycle() {
    let sys = presets::ring4_with_alpha(0.0);
    let z0 = vec![C::new(0.05, 0.0); 4];
    let tr = integrate_network(&sys, &z0, 200.0, 0.01, 100).unwrap();
    for z in tr.last().unwrap() {
        assert!((z.norm() - 0.15f64.sqrt()).abs() < 1e-6, "{}", z.norm());
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    let errs: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&dt| {
            let tr = integrate_fixed(
                |_, y: &[C], out: &mut [C]| out[0] = C::i() * y[0],
                &[C::new(1.0, 0.0)],
                10.0,
                dt,
                1,
            )
            .unwrap();
            (tr.last().unwrap()[0] - C::from_polar(1.0, 10.0)).norm()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() <= 0.2, "observed order {order}");
    }
}

#[test]
fn adaptive_integration_meets_its_tolerance() {
    let tol = Tolerance::default();
    let tr = integrate_adaptive(
        |_, y, out| {
            out[0] = y[1];
            out[1] = -y[0];
        },
        &[1.0, 0.0],
        50.0,
        0.5,
        tol,
    )
    .unwrap();
    for (i, s) in tr.samples.iter().enumerate() {
        let t = tr.time(i);
        assert!(
            (s[0] - t.cos()).abs() < 1e-7 && (s[1] + t.sin()).abs() < 1e-7,
            "t = {t}"
        );
    }
}

#[test]
fn bad_step_is_rejected() {
    assert!(integrate_fixed(|_, _: &[f64], _: &mut [f64]| {}, &[0.0], 1.0, 0.0, 1).is_err());
}

#[test]
fn slow_phase_without_coupling_drifts_linearly() {
    let sp = SlowPhaseSystem::new(
        vec![vec![1, -1]],
        vec![0.02],
        vec![vec![0.0]],
        vec![vec![0.0]],
    )
    .unwrap();
    let tr = integrate_slow_phase(&sp, &[0.3], 100.0, 1.0, Tolerance::default()).unwrap();
    assert!((tr.last().unwrap()[0] - 2.3).abs() < 1e-9);
}

#[test]
fn free_integrate_and_fire_nodes_fire_at_their_natural_period() {
    let cfg = IfConfig::reference().uncoupled();
    // threshold crossings land on the step grid, so the period error is O(dt)
    let tr = integrate_if_ring(&cfg, 400.0, 0.001, 10).unwrap();
    let ps = hnf_core::recover::extract_phase_peaks(&tr).unwrap();
    for (k, w) in hnf_core::recover::fit_slopes(&ps).iter().enumerate() {
        let period = std::f64::consts::TAU / w;
        assert!(
            (period / cfg.natural_period(k) - 1.0).abs() < 2e-3,
            "node {k}: {period}"
        );
    }
}

#[test]
fn delay_must_be_a_multiple_of_the_step() {
    let cfg = IfConfig::reference();
    assert!(integrate_if_ring(&cfg, 10.0, 0.04, 1).is_err());
}

#[test]
fn strongly_coupled_population_synchronizes() {
    let cfg = EnsembleConfig {
        spec: MeanFieldSpec {
            sigma: vec![0.01; 4],
            mu: 5.0,
            alpha: 0.0,
            ..MeanFieldSpec::reference()
        },
        m: 500,
        ..EnsembleConfig::reference(3)
    };
    let run = integrate_microscopic(&cfg, 20.0, 0.01, 100).unwrap();
    for z in run.order.last().unwrap() {
        assert!(z.norm() > 0.95, "{}", z.norm());
    }
}

#[test]
fn uncoupled_population_matches_its_oa_radius() {
    let cfg = EnsembleConfig {
        spec: MeanFieldSpec {
            alpha: 0.0,
            ..MeanFieldSpec::reference()
        },
        ..EnsembleConfig::reference(2)
    };
    let run = integrate_microscopic(&cfg, 300.0, 0.1, 10).unwrap();
    let tail = run.order.after(150.0);
    for k in 0..4 {
        let mean = tail.samples.iter().map(|s| s[k].norm()).sum::<f64>() / tail.len() as f64;
        assert!((mean - 0.2).abs() < 0.05, "population {k}: {mean}");
    }
}

#[test]
fn initial_order_is_seeded() {
    assert_eq!(initial_order(7, 4, 0.3), initial_order(7, 4, 0.3));
    assert_ne!(initial_order(7, 4, 0.3), initial_order(8, 4, 0.3));
    assert!(initial_order(7, 4, 0.3)
        .iter()
        .all(|z| (z.norm() - 0.3).abs() < 1e-12));
}

#[test]
fn order_parameter_of_identical_phases_has_unit_modulus() {
    assert!((order_parameter(&[0.4; 10]).norm() - 1.0).abs() < 1e-12);
    let spread: Vec<f64> = (0..8)
        .map(|j| j as f64 * std::f64::consts::TAU / 8.0)
        .collect();
    assert!(order_parameter(&spread).norm() < 1e-12);
}

#[test]
fn trajectories_round_trip_through_csv() {
    let sys = presets::chain3();
    let z0: Vec<C> = (0..3).map(|k| C::from_polar(0.4, k as f64)).collect();
    let tr = integrate_network(&sys, &z0, 5.0, 0.01, 10).unwrap();
    let mut buf = Vec::new();
    tr.write_csv(&mut buf).unwrap();
    let back = ComplexTrajectory::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.samples, tr.samples);
    assert!((back.dt - tr.dt).abs() < 1e-12);

    let ph = tr.phases();
    let mut buf = Vec::new();
    ph.write_csv(&mut buf).unwrap();
    assert_eq!(
        RealTrajectory::read_csv(buf.as_slice()).unwrap().samples,
        ph.samples
    );
}

#[test]
fn locked_phases_give_no_error_and_sqrt_law_fits_exact_data() {
    let tr = RealTrajectory {
        dt: 1.0,
        samples: (0..50)
            .map(|i| vec![0.1 * i as f64, 0.1 * i as f64])
            .collect(),
        channels: 2,
    };
    assert!(phase_locking_error(&tr, 0, 1) < 1e-12);
    let boundary: Vec<(f64, f64)> = [0.01, 0.04, 0.09]
        .iter()
        .map(|&d: &f64| (d, 1.5 * d.sqrt()))
        .collect();
    let (c, r2) = fit_sqrt_law(&boundary);
    assert!((c - 1.5).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn unwrapping_recovers_smooth_phase(start in -10.0f64..10.0, steps in proptest::collection::vec(-3.0f64..3.0, 1..60)) {
        let mut x = vec![start];
        for s in &steps {
            let last = *x.last().unwrap();
            x.push(last + s);
        }
        let wrapped: Vec<f64> = x.iter().map(|v| v.sin().atan2(v.cos())).collect();
        let un = unwrap_phase(&wrapped);
        let offset = x[0] - un[0];
        for (a, b) in x.iter().zip(&un) {
            prop_assert!((a - b - offset).abs() < 1e-9);
        }
    }
}
