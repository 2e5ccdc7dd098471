//! Floer index arithmetic and stability of graded classes: splittings
//! through intermediate roots, the phase and volume conditions, and
//! Jordan–Hölder decomposition.

mod class;
mod index;
mod splitting;

pub use class::{winding_number, LagClass, Winding};
pub use index::{floer_index, gradable_connect_sum, GradedIntersection};
pub use splitting::{check_stability, class_connector, enumerate_splittings, jordan_holder, Splitting, SplittingVerdict, StabilityReport};
