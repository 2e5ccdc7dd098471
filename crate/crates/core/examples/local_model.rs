//! The local model near a root: the curves `r^n sin(n theta) = c` have
//! identically vanishing phase. Writes `local_model.svg`.
//!
//! ```text
//! cargo run --example local_model [n]
//! ```

use lagflow::io::scene;
use lagflow::slag::local_model_curve;
use lagflow::C;

fn main() {
    let n: usize = std::env::args().nth(1).map_or(3, |a| a.parse().expect("dimension"));
    let mut curves = Vec::new();
    for c in [0.1, 1.0, 10.0] {
        let m = local_model_curve(n, c, 400);
        let worst = m.phase.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let closest = m.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        println!("c = {c:>4}: closest approach {closest:.4}, max |phase| {worst:.1e}");
        curves.push(m.points.into_iter().filter(|z| z.norm() < 4.0).collect::<Vec<C>>());
    }
    let refs: Vec<&[C]> = curves.iter().map(Vec::as_slice).collect();
    std::fs::write("local_model.svg", scene(&[C::new(0.0, 0.0)], &refs, &[], &format!("n = {n}"))).unwrap();
    println!("wrote local_model.svg");
}
