//! Shared numerical tolerances and run parameters.
//!
//! Every tolerance lives in one record so that reports can echo the exact
//! settings a run used. All fields have defaults; a config file only needs to
//! name the ones it overrides.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Minimum pairwise root distance before roots count as degenerate.
    pub sep_tol: f64,
    /// Residual tolerance for roots, relative to `1 + max|coeff|`.
    pub root_tol: f64,
    /// Interior points closer than this to a root are invalid for the velocity.
    pub eps_root: f64,

    /// Number of curve samples used when building initial curves.
    pub n_points: usize,
    /// Smallest number of samples any curve may carry.
    pub n_min: usize,
    /// Hausdorff constant for resampling: error < resample_tol * h^2 * max|kappa|.
    pub resample_tol: f64,
    /// Arclength around pinned endpoints ignored by root-proximity checks,
    /// in units of the mean spacing.
    pub end_guard: f64,

    /// Explicit-step safety factor in dt = c_safety * h^2 * min(conformal factor).
    pub c_safety: f64,
    /// Stop when sup(theta) - inf(theta) drops below this.
    pub conv_tol: f64,
    /// Per-step tolerance for the maximum principle and volume monotonicity.
    pub mp_tol: f64,
    pub tau_max: f64,
    pub dt_min: f64,
    pub max_steps: usize,
    /// Surgery fires below split_radius * h.
    pub split_radius: f64,
    /// Radius, in units of h, of the arc blended into the root after a split.
    pub surgery_blend: f64,
    /// Record a monitor row every this many accepted steps.
    pub record_every: usize,
    /// Maximum recursion depth of flow surgery.
    pub max_surgeries: usize,

    /// Arclength window and margin for the tangent-cone diagnostic.
    pub w_cone: f64,
    pub cone_margin: f64,

    /// Shooting: initial offset and capture radius relative to root separation,
    /// integration step relative to the domain diameter.
    pub shoot_offset: f64,
    pub capture_radius: f64,
    pub shoot_step: f64,

    pub idx_tol: f64,
    /// Winding bound used when enumerating splittings.
    pub winding_bound: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            sep_tol: 1e-8,
            root_tol: 1e-10,
            eps_root: 1e-9,
            n_points: 400,
            n_min: 32,
            resample_tol: 1.0,
            end_guard: 4.0,
            c_safety: 0.4,
            conv_tol: 1e-3,
            mp_tol: 1e-6,
            tau_max: 100.0,
            dt_min: 1e-14,
            max_steps: 5_000_000,
            split_radius: 3.0,
            surgery_blend: 36.0,
            record_every: 100,
            max_surgeries: 8,
            w_cone: 0.25,
            cone_margin: 0.1,
            shoot_offset: 1e-4,
            capture_radius: 1e-3,
            shoot_step: 1e-3,
            idx_tol: 1e-6,
            winding_bound: 1,
        }
    }
}
