use std::f64::consts::PI;

use lagflow::floer::{enumerate_splittings, floer_index, GradedIntersection, LagClass};
use lagflow::error::FloerError;
use lagflow::flow::formula_disagreement;
use lagflow::geometry::{period_and_phase, phase_profile, weighted_volume};
use lagflow::io::{random_sample, to_json, Config};
use lagflow::slag::slag_shoot;
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};
use proptest::prelude::*;
use rand::SeedableRng;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn poly(roots: &[C]) -> ComplexPoly {
    ComplexPoly::from_roots(roots, c(1.0, 0.0), &Numerics::default()).unwrap()
}

fn intersection() -> impl Strategy<Value = (GradedIntersection, i64)> {
    (1usize..=8).prop_flat_map(|n| {
        (prop::collection::vec(1e-3..PI - 1e-3, n), -6i64..=6).prop_map(move |(alphas, k)| {
            let theta1 = alphas.iter().sum::<f64>() - k as f64 * PI;
            (GradedIntersection { n, alphas, theta1 }, k)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn index_duality_and_shift((x, k) in intersection(), m in -4i64..=4) {
        let tol = Numerics::default().idx_tol;
        prop_assert_eq!(floer_index(&x, tol).unwrap(), k);
        prop_assert_eq!(floer_index(&x.dual(), tol).unwrap(), x.n as i64 - k);
        prop_assert_eq!(floer_index(&x.regraded(m), tol).unwrap(), k + m);
        let back = x.dual().dual();
        prop_assert!(back.alphas.iter().zip(&x.alphas).all(|(a, b)| (a - b).abs() < 1e-15) && back.theta1 == x.theta1);
    }

    #[test]
    fn index_rejects_bad_input((x, _) in intersection(), frac in 0.01f64..0.99) {
        let tol = Numerics::default().idx_tol;
        let off = GradedIntersection { theta1: x.theta1 + frac * PI, ..x.clone() };
        prop_assert!(matches!(floer_index(&off, tol), Err(FloerError::NotIntegral(_))));
        let mut wide = x.clone();
        wide.alphas[0] = PI;
        prop_assert!(matches!(floer_index(&wide, tol), Err(FloerError::AngleRange(_))));
        let mut short = x.clone();
        short.alphas.pop();
        let arity = matches!(floer_index(&short, tol), Err(FloerError::Arity { .. }));
        prop_assert!(arity);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volume_bounds_period(n in 2usize..=6, amp in -0.45f64..0.45, bulge in -0.4f64..0.4) {
        let p = poly(&[c(-1.0, 0.0), c(1.0, 0.0), c(0.2, 1.6)]);
        for curve in [MarkedCurve::sine_bump(&p, 0, 1, amp, 300).unwrap(), MarkedCurve::arc(&p, 0, 1, bulge, 300).unwrap()] {
            let w = weighted_volume(&curve, &p, n);
            let pp = period_and_phase(&curve, &p, n).unwrap();
            prop_assert!(w >= pp.period.norm() * (1.0 - 1e-12));
            let range = phase_profile(&curve, &p, n).unwrap().range();
            if range > 1e-3 {
                prop_assert!(w > pp.period.norm() * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn period_is_path_independent(n in 2usize..=6, amp in -0.45f64..0.45, bulge in -0.4f64..0.4) {
        let p = poly(&[c(-1.0, 0.0), c(1.0, 0.0), c(0.2, 1.6)]);
        let a = period_and_phase(&MarkedCurve::sine_bump(&p, 0, 1, amp, 400).unwrap(), &p, n).unwrap();
        let b = period_and_phase(&MarkedCurve::arc(&p, 0, 1, bulge, 400).unwrap(), &p, n).unwrap();
        prop_assert!((a.period - b.period).norm() < 1e-10 * a.period.norm());
    }

    #[test]
    fn velocity_formulas_agree(seed in any::<u64>(), n in prop::sample::select(vec![2usize, 3, 4, 5, 6])) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let (p, curve, _) = random_sample(&mut rng, 150, 0.05);
        prop_assert!(formula_disagreement(&curve, &p, n).unwrap() < 1e-8);
    }

    #[test]
    fn shots_have_constant_phase(n in 2usize..=6, phi in -3.0f64..3.0, root in 0usize..3) {
        let p = poly(&[c(-1.0, 0.0), c(0.3, 0.8), c(1.0, -0.2)]);
        let shot = slag_shoot(&p, n, root, phi, 0, 0.8, &Numerics::default()).unwrap();
        let prof = phase_profile(&shot.curve, &p, n).unwrap();
        let dev = prof.values.iter().fold(0.0f64, |a, v| a.max((v - phi).abs()));
        prop_assert!(dev < 1e-8, "deviation {:e}", dev);
    }

    #[test]
    fn splitting_periods_add_up(n in 2usize..=6, x in -0.6f64..0.6, y in 0.3f64..0.9) {
        let p = poly(&[c(-1.0, 0.0), c(x, y), c(1.0, 0.0), c(0.1, -0.8)]);
        let class = LagClass::chord(&p, n, 0, 2).unwrap();
        let splittings = enumerate_splittings(&class, &p, 1, &Numerics::default()).unwrap();
        prop_assert!(!splittings.is_empty());
        for s in splittings {
            let sum = s.first.period + s.second.period;
            prop_assert!((sum - class.period).norm() < 1e-8 * class.volume());
        }
    }

    #[test]
    fn config_survives_serialisation(n in 2usize..=8, amp in -1.0f64..1.0, c_safety in 0.05f64..0.5, every in 0usize..1000) {
        let text = format!(
            r#"{{"dimension": {n}, "polynomial": {{"roots": [[-1,0],[1,0],[0,2]]}},
                "initial_curve": {{"type": "sine", "amplitude": {amp}}},
                "numerics": {{"c_safety": {c_safety}}}, "output": {{"snapshot_every": {every}}}}}"#
        );
        let cfg = Config::from_str_named(&text, "t").unwrap();
        let again = Config::from_str_named(&to_json(&cfg), "t").unwrap();
        prop_assert_eq!(&again, &cfg);
        prop_assert_eq!(to_json(&again), to_json(&cfg));
    }
}
