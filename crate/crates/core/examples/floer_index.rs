//! Indices of graded intersection points.
//!
//! ```text
//! cargo run --example floer_index
//! ```

use std::f64::consts::PI;

use lagflow::floer::{floer_index, gradable_connect_sum, GradedIntersection};
use lagflow::Numerics;

fn main() {
    let tol = Numerics::default().idx_tol;
    for n in 2..=6 {
        let model = GradedIntersection { n, alphas: vec![PI / n as f64; n], theta1: 0.0 };
        let k = floer_index(&model, tol).unwrap();
        let dual = floer_index(&model.dual(), tol).unwrap();
        println!(
            "n = {n}: model index {k}, dual {dual}, regraded by [1] {}, by [2] {}, connect sum gradable: {}",
            floer_index(&model.regraded(1), tol).unwrap(),
            floer_index(&model.regraded(2), tol).unwrap(),
            gradable_connect_sum(&model, tol).unwrap()
        );
    }

    let skew = GradedIntersection { n: 3, alphas: vec![0.3, 1.1, 2.0], theta1: 3.4 - PI };
    println!("skew point: index {:?}", floer_index(&skew, tol));
    let off = GradedIntersection { theta1: 0.5, ..skew.clone() };
    println!("ungraded phase: {:?}", floer_index(&off, tol));
}
