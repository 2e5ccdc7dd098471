//! In odd dimension the phase involves a square root of `p`. The segment
//! between the roots of `t^2 - 1` is special Lagrangian with phase `pi/2`
//! and period `i pi/2`; a perturbed segment flows back to it.
//!
//! ```text
//! cargo run --release --example odd_dimension
//! ```

use lagflow::flow::run;
use lagflow::geometry::{period_and_phase, phase_profile};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};

fn main() {
    let num = Numerics::default();
    let p = ComplexPoly::from_roots(&[C::new(-1.0, 0.0), C::new(1.0, 0.0)], C::new(1.0, 0.0), &num).unwrap();

    let segment = MarkedCurve::segment(&p, 0, 1, num.n_points).unwrap();
    let pp = period_and_phase(&segment, &p, 3).unwrap();
    println!("segment: period {:.12}, phase {:.12}", pp.period, pp.phi);

    let bumped = MarkedCurve::sine_bump(&p, 0, 1, -0.2, num.n_points).unwrap();
    let prof = phase_profile(&bumped, &p, 3).unwrap();
    println!("bumped: phase in [{:.4}, {:.4}]", prof.inf, prof.sup);

    let (report, finals) = run(&bumped, &p, 3, &num).unwrap();
    let last = &finals[0];
    let prof = phase_profile(last, &p, 3).unwrap();
    let pp = period_and_phase(last, &p, 3).unwrap();
    println!("{:?} after {} steps", report.verdict, report.monotonicity.accepted_steps);
    println!("final: phase in [{:.6}, {:.6}], period {:.12}", prof.inf, prof.sup, pp.period);
}
