//! Constant-phase curves: a shot from a root, the connector between two
//! roots found by bisection on the phase, and the atlas of all connectors.
//!
//! ```text
//! cargo run --release --example slag_curves [n]
//! ```

use lagflow::geometry::phase_profile;
use lagflow::slag::{cone_directions, slag_atlas, slag_connect, slag_shoot};
use lagflow::{ComplexPoly, Numerics, C};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(3, |a| a.parse().expect("dimension"));
    let num = Numerics::default();
    let roots = [C::new(-1.0, 0.0), C::new(0.3, 0.8), C::new(1.0, -0.2)];
    let p = ComplexPoly::from_roots(&roots, C::new(1.0, 0.0), &num).unwrap();

    let ([lo, hi], width) = cone_directions(&p, n, 0, 0.2, 0.7).unwrap();
    println!("phases [0.2, 0.7] leave root 0 between directions {lo:.4} and {hi:.4} (width {width:.4})");

    let shot = slag_shoot(&p, n, 0, 0.45, 0, 3.0, &num).unwrap();
    let prof = phase_profile(&shot.curve, &p, n).unwrap();
    println!(
        "shot at phase 0.45: {} samples, captured by {:?}, phase range {:.1e}",
        shot.curve.len(),
        shot.captured,
        prof.range()
    );

    match slag_connect(&p, n, 0, 2, [0.2, 0.7], 0, &num) {
        Ok(conn) => {
            let prof = phase_profile(&conn.curve, &p, n).unwrap();
            println!("connector 0 -> 2: phase {:.12}, {} samples, phase range {:.1e}", conn.phi_star, conn.curve.len(), prof.range());
        }
        Err(e) => println!("no connector 0 -> 2 in [0.2, 0.7]: {e}"),
    }

    let atlas = slag_atlas(&p, n, 12, &num);
    println!("atlas: {} connectors", atlas.len());
    for c in &atlas {
        println!(
            "  {:?} -> {:?} branch {} phase {:+.6}",
            c.curve.left_root, c.curve.right_root, c.branch, c.phi_star
        );
    }
}
