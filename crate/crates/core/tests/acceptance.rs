use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use lagflow::curve::hausdorff;
use lagflow::floer::{
    enumerate_splittings, floer_index, gradable_connect_sum, jordan_holder, check_stability, GradedIntersection,
    LagClass,
};
use lagflow::flow::{
    chord_lengths, first_variation, formula_disagreement, run_observed, stable_dt, theta_rate_check, FlowReport,
    Verdict,
};
use lagflow::geometry::{period_and_phase, phase_profile, weighted_volume};
use lagflow::io::random_sample;
use lagflow::slag::{local_model_curve, slag_connect};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn poly(roots: &[C]) -> ComplexPoly {
    ComplexPoly::from_roots(roots, c(1.0, 0.0), &Numerics::default()).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

/// A finished flow scenario: report, leaf curves, wall time, and whatever the
/// observer captured along the way.
struct Scenario {
    p: ComplexPoly,
    n: usize,
    initial: MarkedCurve,
    report: FlowReport,
    finals: Vec<MarkedCurve>,
    elapsed: Duration,
    snapshots: Vec<MarkedCurve>,
}

fn run_scenario(p: ComplexPoly, n: usize, initial: MarkedCurve, snap_at: &[usize]) -> Scenario {
    let num = Numerics::default();
    let mut snapshots = Vec::new();
    let mut count = 0usize;
    let start = Instant::now();
    let (report, finals) = run_observed(&initial, &p, n, &num, &mut |state, _| {
        count += 1;
        if snap_at.contains(&count) {
            snapshots.push(state.curve.clone());
        }
    })
    .unwrap();
    Scenario { p, n, initial, report, finals, elapsed: start.elapsed(), snapshots }
}

fn a1() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = [2, 3, 4, 6][i % 4];
        let (p, curve, _) = random_sample(&mut rng, 200, 0.05);
        worst = worst.max(formula_disagreement(&curve, &p, n).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome("A1", worst < 1e-8 && secs < 10.0, format!("max relative disagreement {worst:.2e} over 100 curves, {secs:.2}s"))
}

fn a2() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let cases = [
        (2, vec![c(-1.0, 0.0), c(1.0, 0.0)]),
        (3, vec![c(-1.0, 0.0), c(1.0, 0.0), c(0.3, 0.9)]),
        (4, vec![c(-1.0, 0.0), c(1.0, 0.0)]),
        (6, vec![c(-1.0, 0.0), c(1.0, 0.0), c(0.0, -0.8)]),
    ];
    let mut worst = 0.0f64;
    for (n, roots) in &cases {
        let p = poly(roots);
        let curve = MarkedCurve::sine_bump(&p, 0, 1, 0.3, 1600).unwrap();
        let s = chord_lengths(&curve);
        let total = s[s.len() - 1];
        for _ in 0..5 {
            let coef: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let psi: Vec<f64> = s
                .iter()
                .map(|&x| {
                    let u = x / total;
                    if u <= 0.1 || u >= 0.9 {
                        return 0.0;
                    }
                    let v = (u - 0.1) / 0.8;
                    let modes: f64 = coef.iter().enumerate().map(|(j, a)| a * ((j + 1) as f64 * PI * v).cos()).sum();
                    (PI * v).sin().powi(3) * modes
                })
                .collect();
            let (fd, pairing) = first_variation(&curve, &p, *n, &psi, 1e-5).unwrap();
            worst = worst.max((fd - pairing).abs() / fd.abs().max(pairing.abs()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome("A2", worst < 1e-4 && secs < 30.0, format!("max relative mismatch {worst:.2e} over 20 perturbations, {secs:.2}s"))
}

fn a3(sc: &Scenario) -> Outcome {
    let f = &sc.finals[0];
    let range = phase_profile(f, &sc.p, sc.n).unwrap().range();
    let dist = hausdorff(&f.points, &[c(-1.0, 0.0), c(1.0, 0.0)]);
    let secs = sc.elapsed.as_secs_f64();
    let pass = sc.report.verdict == Verdict::Converged && range < 1e-3 && dist < 2e-3 && secs < 120.0;
    outcome(
        "A3",
        pass,
        format!("{:?}, phase range {range:.6e}, Hausdorff to segment {dist:.2e}, {secs:.1}s", sc.report.verdict),
    )
}

fn a4_side(p: &ComplexPoly) -> (f64, String) {
    let num = Numerics::default();
    let mut violating = Vec::new();
    for bulge in [0.5, -0.5] {
        let curve = MarkedCurve::arc(p, 0, 2, bulge, 400).unwrap();
        let r = check_stability(&curve, p, 2, 1, &num).unwrap();
        if !r.close_ok && r.splittings.iter().any(|s| s.destabilising) {
            violating.push(bulge);
        }
    }
    assert_eq!(violating.len(), 1, "exactly one side should violate the phase condition");
    (violating[0], format!("bulge {}", violating[0]))
}

fn a4(sc: &Scenario, side: &str) -> Outcome {
    let mid = sc.p.nearest_root(c(0.0, 0.2)).1;
    let split_ok = matches!(sc.report.verdict, Verdict::SplitAt { root, .. } if root == mid);
    let leaves_ok = sc.report.leaf_verdicts().iter().all(|v| *v == Verdict::Converged) && sc.finals.len() == 2;
    let phis: Vec<f64> = sc.finals.iter().map(|f| period_and_phase(f, &sc.p, 2).unwrap().phi).collect();
    // Distance of every sample's phase from the straight connector's.
    let off = |i: usize, target: f64| {
        sc.finals.get(i).map_or(f64::INFINITY, |f| {
            let prof = phase_profile(f, &sc.p, 2).unwrap();
            prof.values.iter().fold(0.0f64, |a, v| a.max((v - target).abs()))
        })
    };
    let target = 0.2f64.atan();
    let (err1, err2) = (off(0, target), off(1, -target));
    let ordered = phis.len() == 2 && phis[0] > phis[1];
    let secs = sc.elapsed.as_secs_f64();
    let pass = split_ok && leaves_ok && err1 < 1e-3 && err2 < 1e-3 && ordered && secs < 180.0;
    outcome(
        "A4",
        pass,
        format!("{side}, {:?}, pieces phi {phis:.9?}, max |theta - phi_piece| {err1:.2e} / {err2:.2e}, {secs:.1}s", sc.report.verdict),
    )
}

fn a5(sc: &Scenario) -> Outcome {
    let f = &sc.finals[0];
    let prof = phase_profile(f, &sc.p, 3).unwrap();
    let off = prof.values.iter().fold(0.0f64, |a, v| a.max((v - FRAC_PI_2).abs()));
    let pp = period_and_phase(f, &sc.p, 3).unwrap();
    let period_err = (pp.period - c(0.0, FRAC_PI_2)).norm();
    let phi_err = (pp.phi - FRAC_PI_2).abs();
    let pass = sc.report.verdict == Verdict::Converged && off < 1e-3 && period_err < 1e-6 && phi_err < 1e-3;
    outcome(
        "A5",
        pass,
        format!(
            "{:?}, max |theta - pi/2| {off:.2e}, period {:.9}, |period - i pi/2| {period_err:.2e}, phi {:.9}",
            sc.report.verdict, pp.period, pp.phi
        ),
    )
}

fn walk(r: &FlowReport, f: &mut impl FnMut(&FlowReport)) {
    f(r);
    r.pieces.iter().for_each(|q| walk(q, f));
}

fn a6(scs: &[&Scenario]) -> Outcome {
    let (mut sup, mut inf, mut vol) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut accepted, mut rejected) = (0, 0);
    for sc in scs {
        walk(&sc.report, &mut |r| {
            let m = &r.monotonicity;
            accepted += m.accepted_steps;
            rejected += m.rejected_steps;
            sup = sup.max(m.max_sup_increase.unwrap_or(f64::NEG_INFINITY));
            inf = inf.max(m.max_inf_decrease.unwrap_or(f64::NEG_INFINITY));
            vol = vol.max(m.max_volume_increase.unwrap_or(f64::NEG_INFINITY));
        });
    }
    let pass = accepted > 0 && sup <= 1e-6 && inf <= 1e-6 && vol <= 1e-6;
    outcome(
        "A6",
        pass,
        format!(
            "{accepted} accepted / {rejected} rejected steps; worst sup rise {sup:.6e}, inf drop {inf:.6e}, W rise {vol:.2e}"
        ),
    )
}

fn a7(sc: &Scenario) -> Outcome {
    let num = Numerics::default();
    let mut medians = Vec::new();
    for curve in &sc.snapshots {
        let dt = 0.1 * stable_dt(curve, &sc.p, &num);
        let (rate, expected) = theta_rate_check(curve, &sc.p, sc.n, dt, &num).unwrap();
        let m = rate.len();
        let errs: Vec<f64> =
            (3..m - 3).map(|k| (rate[k] - expected[k]).abs() / expected[k].abs().max(f64::MIN_POSITIVE)).collect();
        medians.push(median(errs));
    }
    let worst = medians.iter().copied().fold(0.0, f64::max);
    let pass = !medians.is_empty() && worst < 0.05;
    let shown: Vec<String> = medians.iter().map(|m| format!("{m:.2e}")).collect();
    outcome("A7", pass, format!("median relative error per snapshot [{}]", shown.join(", ")))
}

fn decay_slope(r: &FlowReport) -> (f64, f64) {
    let tail = &r.series[r.series.len() / 2..];
    let xs: Vec<f64> = tail.iter().map(|s| s.tau).collect();
    let ys: Vec<f64> = tail.iter().map(|s| s.l2_phase_var.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let falling = ys.windows(2).filter(|w| w[1] < w[0]).count() as f64 / (ys.len() - 1) as f64;
    (sxy / sxx, falling)
}

fn a8(scs: &[&Scenario]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for sc in scs {
        let (slope, falling) = decay_slope(&sc.report);
        let first = sc.report.series[sc.report.series.len() / 2].l2_phase_var;
        let last = sc.report.last().l2_phase_var;
        pass &= slope < 0.0 && last < first;
        parts.push(format!("n={} slope {slope:.3e}, falling fraction {falling:.3}", sc.n));
    }
    outcome("A8", pass, parts.join("; "))
}

fn a9() -> Outcome {
    let tol = Numerics::default().idx_tol;
    let mut rng = StdRng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let alphas: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..PI - 1e-3)).collect();
        let k = rng.gen_range(-5i64..=5);
        let x = GradedIntersection { n, theta1: alphas.iter().sum::<f64>() - k as f64 * PI, alphas };
        let idx = floer_index(&x, tol).unwrap();
        let dual = floer_index(&x.dual(), tol).unwrap();
        let shifted = floer_index(&x.regraded(2), tol).unwrap();
        if idx != k || idx + dual != n as i64 || shifted != idx + 2 {
            bad += 1;
        }
    }
    let mut model_ok = true;
    for n in 2..=8 {
        let x = GradedIntersection { n, alphas: vec![PI / n as f64; n], theta1: 0.0 };
        model_ok &= floer_index(&x, tol).unwrap() == 1 && gradable_connect_sum(&x, tol).unwrap();
        model_ok &= floer_index(&x.regraded(2), tol).unwrap() == 3;
    }
    outcome("A9", bad == 0 && model_ok, format!("{bad} of 1000 random inputs violate duality or shift; model index 1: {model_ok}"))
}

fn a10() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for cc in [0.1, 1.0, 10.0] {
            let m = local_model_curve(n, cc, 400);
            worst = m.phase.iter().fold(worst, |a, v| a.max(v.abs()));
        }
    }
    outcome("A10", worst <= 1e-10, format!("max |phase| {worst:.2e} over n = 2..6, c in {{0.1, 1, 10}}"))
}

fn a11(extra: &[(&ComplexPoly, usize, &MarkedCurve)]) -> Outcome {
    let num = Numerics::default();
    // Path independence: homotopic curves with different shapes.
    let p3 = poly(&[c(-1.0, 0.0), c(1.0, 0.0), c(0.4, 1.5)]);
    let mut path_err = 0.0f64;
    for n in 2..=6 {
        let a = MarkedCurve::arc(&p3, 0, 1, 0.3, 2000).unwrap();
        let b = MarkedCurve::sine_bump(&p3, 0, 1, -0.25, 2000).unwrap();
        let pa = period_and_phase(&a, &p3, n).unwrap().period;
        let pb = period_and_phase(&b, &p3, n).unwrap().period;
        path_err = path_err.max((pa - pb).norm() / pa.norm());
    }

    // Volume against period, with the equality case.
    let quad = poly(&[c(-1.0, 0.0), c(1.0, 0.0)]);
    let mut tests: Vec<(ComplexPoly, usize, MarkedCurve)> = Vec::new();
    for n in 2..=6 {
        tests.push((quad.clone(), n, MarkedCurve::segment(&quad, 0, 1, 400).unwrap()));
        tests.push((quad.clone(), n, MarkedCurve::sine_bump(&quad, 0, 1, 0.2, 400).unwrap()));
        tests.push((p3.clone(), n, MarkedCurve::arc(&p3, 0, 1, 0.3, 400).unwrap()));
        tests.push((p3.clone(), n, MarkedCurve::arc(&p3, 0, 2, -0.2, 400).unwrap()));
    }
    let pc = poly(&[c(-1.0, 0.0), c(0.3, 0.8), c(1.0, -0.2)]);
    let connector = slag_connect(&pc, 3, 0, 2, [0.2, 0.7], 0, &num).unwrap();
    tests.push((pc.clone(), 3, connector.curve));
    let mut inequality_ok = true;
    let mut iff_ok = true;
    let mut equal_cases = 0;
    for (p, n, curve) in &tests {
        let w = weighted_volume(curve, p, *n);
        let pp = period_and_phase(curve, p, *n).unwrap();
        let range = phase_profile(curve, p, *n).unwrap().range();
        let gap = (w - pp.period.norm()) / w;
        inequality_ok &= gap >= -1e-12;
        let equal = gap <= 1e-6;
        equal_cases += equal as usize;
        iff_ok &= equal == (range <= 1e-6);
    }
    // Flow outputs only enter the inequality: a phase range of 1e-4 already
    // gives a relative gap near 1e-9.
    for (p, n, curve) in extra {
        let w = weighted_volume(curve, p, *n);
        let pp = period_and_phase(curve, p, *n).unwrap();
        inequality_ok &= w - pp.period.norm() >= -1e-12 * w;
    }

    // Additivity of periods over splittings.
    let p4 = poly(&[c(-1.0, 0.0), c(0.0, 0.4), c(1.0, 0.0), c(0.2, -0.7)]);
    let mut add_err = 0.0f64;
    let mut splits = 0;
    for n in 2..=6 {
        for (a, b) in [(0, 2), (0, 1), (1, 3)] {
            let class = LagClass::chord(&p4, n, a, b).unwrap();
            for s in enumerate_splittings(&class, &p4, 1, &num).unwrap() {
                let sum = s.first.period + s.second.period;
                add_err = add_err.max((sum - class.period).norm() / class.volume());
                splits += 1;
            }
        }
    }
    let pass = path_err < 1e-8 && inequality_ok && iff_ok && add_err < 1e-8 && splits > 0;
    outcome(
        "A11",
        pass,
        format!(
            "path independence {path_err:.2e}; W >= |P| on {} curves: {inequality_ok}; equality iff constant phase: {iff_ok} ({equal_cases} equal); additivity {add_err:.2e} over {splits} splittings",
            tests.len() + extra.len()
        ),
    )
}

fn a12(sc: &Scenario) -> Outcome {
    let num = Numerics::default();
    let class = LagClass::of_curve(&sc.initial, &sc.p, 2).unwrap();
    let jh = jordan_holder(&class, &sc.p, 1, &num).unwrap();
    let flowed: Vec<LagClass> = sc.finals.iter().map(|f| LagClass::of_curve(f, &sc.p, 2).unwrap()).collect();
    let same = jh.len() == flowed.len()
        && jh.iter().zip(&flowed).all(|(a, b)| {
            a.root_pair == b.root_pair && a.winding == b.winding && (a.phi - b.phi).abs() < 1e-3
        });
    let show = |v: &[LagClass]| v.iter().map(|k| format!("{:?} phi {:.6}", k.root_pair, k.phi)).collect::<Vec<_>>().join(", ");
    outcome("A12", same, format!("Jordan-Holder [{}] vs flow [{}]", show(&jh), show(&flowed)))
}

fn main() {
    let mut results = vec![a1(), a2()];

    let quad = poly(&[c(-1.0, 0.0), c(1.0, 0.0)]);
    let snaps = [1, 1_000, 10_000, 50_000, 100_000, 200_000, 300_000];
    let s3 = run_scenario(quad.clone(), 2, MarkedCurve::sine_bump(&quad, 0, 1, 0.2, 400).unwrap(), &snaps);
    results.push(a3(&s3));

    let tri = poly(&[c(-1.0, 0.0), c(0.0, 0.2), c(1.0, 0.0)]);
    let (bulge, side) = a4_side(&tri);
    let s4 = run_scenario(tri.clone(), 2, MarkedCurve::arc(&tri, 0, 2, bulge, 400).unwrap(), &[]);
    results.push(a4(&s4, &side));

    let s5 = run_scenario(quad.clone(), 3, MarkedCurve::sine_bump(&quad, 0, 1, -0.2, 400).unwrap(), &[]);
    results.push(a5(&s5));

    results.push(a6(&[&s3, &s4, &s5]));
    results.push(a7(&s3));
    results.push(a8(&[&s3, &s5]));
    results.push(a9());
    results.push(a10());
    let extra: Vec<(&ComplexPoly, usize, &MarkedCurve)> = [&s3, &s4, &s5]
        .iter()
        .flat_map(|sc| std::iter::once(&sc.initial).chain(&sc.finals).map(move |f| (&sc.p, sc.n, f)))
        .collect();
    results.push(a11(&extra));
    results.push(a12(&s4));

    let mut failed = 0;
    for r in &results {
        println!("{} {} {}", r.id, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += !r.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
