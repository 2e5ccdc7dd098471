//! A bumped segment between the roots of `t^2 - 1` flows back to the straight
//! segment in dimension 2.
//!
//! ```text
//! cargo run --release --example stable_flow [amplitude]
//! ```

use lagflow::curve::hausdorff;
use lagflow::flow::{run, volume_dissipation};
use lagflow::geometry::{period_and_phase, phase_profile, weighted_volume};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};

fn main() {
    let amplitude: f64 = std::env::args().nth(1).map_or(0.2, |a| a.parse().expect("amplitude"));
    let num = Numerics::default();
    let p = ComplexPoly::from_roots(&[C::new(-1.0, 0.0), C::new(1.0, 0.0)], C::new(1.0, 0.0), &num).unwrap();
    let curve = MarkedCurve::sine_bump(&p, 0, 1, amplitude, num.n_points).unwrap();

    let prof = phase_profile(&curve, &p, 2).unwrap();
    println!("initial: phase range {:.4}, W = {:.6}", prof.range(), weighted_volume(&curve, &p, 2));
    println!("         dW/dtau = -{:.4e}", volume_dissipation(&curve, &p, 2, &num).unwrap());

    let (report, finals) = run(&curve, &p, 2, &num).unwrap();
    let last = finals.last().unwrap();
    let m = &report.monotonicity;
    println!("verdict {:?} at tau = {:.4}", report.verdict, report.last().tau);
    println!("{} accepted steps, {} rejected", m.accepted_steps, m.rejected_steps);
    println!(
        "worst per-step rise: sup theta {:.2e}, -inf theta {:.2e}, W {:.2e}",
        m.max_sup_increase.unwrap_or(0.0),
        m.max_inf_decrease.unwrap_or(0.0),
        m.max_volume_increase.unwrap_or(0.0)
    );

    let pp = period_and_phase(last, &p, 2).unwrap();
    println!("final: phase {:.6}, W = {:.9}, |period| = {:.9}", pp.phi, weighted_volume(last, &p, 2), pp.period.norm());
    println!("Hausdorff distance to [-1, 1]: {:.3e}", hausdorff(&last.points, &[C::new(-1.0, 0.0), C::new(1.0, 0.0)]));

    // Every tenth of the run: the weighted phase variance decays exponentially.
    let stride = (report.series.len() / 10).max(1);
    for rec in report.series.iter().step_by(stride) {
        println!("  tau {:>8.4}  range {:.3e}  variance {:.3e}", rec.tau, rec.sup_theta - rec.inf_theta, rec.l2_phase_var);
    }
}
