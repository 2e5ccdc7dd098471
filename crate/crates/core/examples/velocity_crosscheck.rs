//! The normal velocity computed three ways on random curves, and the flow as
//! the gradient of the weighted volume.
//!
//! ```text
//! cargo run --release --example velocity_crosscheck [seed]
//! ```

use lagflow::flow::{chord_lengths, first_variation, formula_disagreement};
use lagflow::io::random_sample;
use lagflow::{ComplexPoly, MarkedCurve, Numerics, C};
use rand::SeedableRng;

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(1, |a| a.parse().expect("seed"));
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for n in [2, 3, 4, 6] {
        let worst = (0..10)
            .map(|_| {
                let (p, curve, _) = random_sample(&mut rng, 200, 0.05);
                formula_disagreement(&curve, &p, n).unwrap()
            })
            .fold(0.0, f64::max);
        println!("n = {n}: largest relative disagreement over 10 random curves {worst:.2e}");
    }

    let num = Numerics::default();
    let p = ComplexPoly::from_roots(&[C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(0.3, 0.9)], C::new(1.0, 0.0), &num)
        .unwrap();
    let curve = MarkedCurve::sine_bump(&p, 0, 1, 0.3, 1600).unwrap();
    let s = chord_lengths(&curve);
    let total = s[s.len() - 1];
    let psi: Vec<f64> = s
        .iter()
        .map(|&x| {
            let u = x / total;
            if (0.2..0.8).contains(&u) {
                (std::f64::consts::PI * (u - 0.2) / 0.6).sin().powi(3)
            } else {
                0.0
            }
        })
        .collect();
    for n in 2..=5 {
        let (fd, pairing) = first_variation(&curve, &p, n, &psi, 1e-5).unwrap();
        println!("n = {n}: dW along psi N = {fd:+.8}, -<V, psi> = {pairing:+.8}");
    }
}
