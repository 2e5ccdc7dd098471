//! The reduced flow: velocity fields, explicit time stepping with a
//! monotonicity-enforcing accept/reject ladder, monitors, and surgery at
//! roots the curve runs into.

mod diagnostics;
mod engine;
mod surgery;
mod velocity;

pub use diagnostics::{
    chord_lengths, first_variation, formula_disagreement, theta_rate_check, volume_dissipation, weighted_laplacian,
    weighted_laplacian_diagnostic,
};
pub use engine::{
    advance, normal_step, run, run_observed, stable_dt, step, FlowReport, FlowState, Monotonicity, SeriesRecord,
    StepObserver, Verdict,
};
pub use surgery::detect_and_split;
pub use velocity::{
    double_cover_curvature, max_double_cover_curvature, normal_speed, velocity, velocity_field, Formula,
    VelocityField,
};
