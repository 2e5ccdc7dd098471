//! Reduced mean-curvature-type flow of O(n)-invariant Lagrangian spheres in
//! the affine quadric family `x_1^2 + ... + x_n^2 = p(t)`.
//!
//! A Lagrangian sphere is described by a curve in the `t`-plane joining two
//! roots of `p`. This crate evolves such curves, shoots and connects special
//! Lagrangian (constant phase) curves, computes periods and graded phases,
//! and evaluates stability and Jordan–Hölder decompositions using flow
//! surgery at roots.

pub mod curve;
pub mod error;
pub mod floer;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod cli;
mod chart;
mod fd;
pub mod numerics;
pub mod polynomial;
pub mod slag;

pub use curve::MarkedCurve;
pub use numerics::Numerics;
pub use polynomial::{ComplexPoly, C};
