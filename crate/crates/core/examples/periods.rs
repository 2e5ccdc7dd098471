//! Periods and graded phases of Lagrangian classes, and the bound of the
//! weighted volume by the period.
//!
//! ```text
//! cargo run --release --example periods
//! ```

use lagflow::floer::LagClass;
use lagflow::geometry::{period_and_phase, phase_profile, weighted_volume};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};

fn main() {
    let num = Numerics::default();
    let roots = [C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(0.2, 1.2)];
    let p = ComplexPoly::from_roots(&roots, C::new(1.0, 0.0), &num).unwrap();

    for n in 2..=5 {
        let chord = LagClass::chord(&p, n, 0, 1).unwrap();
        let around = LagClass::with_winding(&p, n, 0, 1, vec![(2, 1)]).unwrap();
        println!("n = {n}");
        println!("  chord 0-1:          period {:.9}, phase {:+.6}", chord.period, chord.phi);
        println!("  once around root 2: period {:.9}, phase {:+.6}", around.period, around.phi);

        // Different curves in the chord's class share its period.
        for (name, curve) in [
            ("arc   ", MarkedCurve::arc(&p, 0, 1, 0.4, 800).unwrap()),
            ("sine  ", MarkedCurve::sine_bump(&p, 0, 1, -0.3, 800).unwrap()),
        ] {
            let pp = period_and_phase(&curve, &p, n).unwrap();
            let w = weighted_volume(&curve, &p, n);
            let range = phase_profile(&curve, &p, n).unwrap().range();
            println!(
                "  {name} |P - P_chord| = {:.1e}, W = {w:.6} >= |P| = {:.6}, phase range {range:.3}",
                (pp.period - chord.period).norm(),
                pp.period.norm()
            );
        }
    }
}
