//! An arc that passes above the root `0.2i` of `(t^2 - 1)(t - 0.2i)` is
//! unstable: the flow pulls it onto the root, splits it there, and the two
//! pieces settle on the straight connectors. The decomposition predicted
//! from the class alone matches.
//!
//! ```text
//! cargo run --release --example split_at_root
//! ```

use lagflow::floer::{check_stability, jordan_holder, LagClass};
use lagflow::flow::{run, Verdict};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};

fn main() {
    let num = Numerics::default();
    let roots = [C::new(-1.0, 0.0), C::new(0.0, 0.2), C::new(1.0, 0.0)];
    let p = ComplexPoly::from_roots(&roots, C::new(1.0, 0.0), &num).unwrap();

    // Decide which side of the middle root is the unstable one.
    let mut chosen = None;
    for bulge in [0.5, -0.5] {
        let arc = MarkedCurve::arc(&p, 0, 2, bulge, num.n_points).unwrap();
        let r = check_stability(&arc, &p, 2, num.winding_bound, &num).unwrap();
        println!("bulge {bulge:+}: phase condition {}, volume condition {}", r.close_ok, r.vclose_ok);
        for s in &r.splittings {
            println!(
                "    through root {}: sub {:.6}, quotient {:.6}, destabilising {}",
                s.root, s.phi1, s.phi2, s.destabilising
            );
        }
        if !r.close_ok && r.splittings.iter().any(|s| s.destabilising) {
            chosen = Some(arc);
        }
    }
    let arc = chosen.expect("one side has a destabilising splitting");

    let class = LagClass::of_curve(&arc, &p, 2).unwrap();
    let predicted = jordan_holder(&class, &p, num.winding_bound, &num).unwrap();

    let (report, finals) = run(&arc, &p, 2, &num).unwrap();
    if let Verdict::SplitAt { root, tau } = report.verdict {
        println!("split at root {root} ({}) at tau = {tau:.4}", roots[root]);
    }
    for (piece, (f, want)) in report.pieces.iter().zip(finals.iter().zip(&predicted)) {
        let got = LagClass::of_curve(f, &p, 2).unwrap();
        println!(
            "piece {:?}: {:?} after {} steps, phase {:.9} (predicted {:.9})",
            got.root_pair,
            piece.verdict,
            piece.monotonicity.accepted_steps,
            got.phi,
            want.phi
        );
    }
}
