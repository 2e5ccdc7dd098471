//! Stability conditions of a class and its Jordan–Hölder decomposition on a
//! polynomial with four roots.
//!
//! ```text
//! cargo run --release --example stability [n]
//! ```

use lagflow::floer::{check_stability, enumerate_splittings, jordan_holder, LagClass};
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(2, |a| a.parse().expect("dimension"));
    let num = Numerics::default();
    let roots = [C::new(-1.5, 0.0), C::new(-0.4, 0.35), C::new(0.5, -0.3), C::new(1.5, 0.0)];
    let p = ComplexPoly::from_roots(&roots, C::new(1.0, 0.0), &num).unwrap();

    let class = LagClass::chord(&p, n, 0, 3).unwrap();
    println!("class {:?}: period {:.6}, phase {:+.6}", class.root_pair, class.period, class.phi);
    for s in enumerate_splittings(&class, &p, 1, &num).unwrap() {
        println!(
            "  via root {} with {:?}: sub {:?} {:+.6}, quotient {:?} {:+.6}, destabilising {}, connectors {:?}",
            s.root,
            s.first.winding,
            s.sub().root_pair,
            s.sub().phi,
            s.quotient().root_pair,
            s.quotient().phi,
            s.destabilising(),
            s.slag
        );
    }
    let pieces = jordan_holder(&class, &p, 1, &num).unwrap();
    println!("Jordan-Holder pieces:");
    for k in &pieces {
        println!("  {:?} winding {:?} phase {:+.6}", k.root_pair, k.winding, k.phi);
    }

    for bulge in [0.6, -0.6] {
        let arc = MarkedCurve::arc(&p, 0, 3, bulge, 600).unwrap();
        let r = check_stability(&arc, &p, n, 1, &num).unwrap();
        println!(
            "arc bulge {bulge:+}: theta in [{:+.4}, {:+.4}], phase condition {}, volume condition {}",
            r.inf_theta, r.sup_theta, r.close_ok, r.vclose_ok
        );
    }
}
