use serde::{Deserialize, Serialize};

use crate::curve::MarkedCurve;
use crate::error::FlowError;
use crate::geometry::{
    continue_grading, phase_moments, phase_profile, tangent_cone_variation, weighted_volume, PhaseProfile,
};
use crate::numerics::Numerics;
use crate::polynomial::ComplexPoly;

use super::surgery::detect_and_split;
use super::velocity::{max_double_cover_curvature, velocity_field, Formula};

/// One row of the monitor time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub tau: f64,
    pub sup_theta: f64,
    pub inf_theta: f64,
    pub weighted_volume: f64,
    pub min_root_dist: f64,
    pub max_curvature_dc: f64,
    pub dt: f64,
    pub theta_bar: f64,
    pub l2_phase_var: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Converged,
    SplitAt { root: usize, tau: f64 },
    StepFailure,
    MaxTime,
}

/// Largest per-step violations of the monotone quantities over accepted
/// steps (negative values mean strict monotonicity held throughout; `None`
/// before the first accepted step).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Monotonicity {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_sup_increase: Option<f64>,
    pub max_inf_decrease: Option<f64>,
    pub max_volume_increase: Option<f64>,
}

fn worst(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.max(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub dimension: usize,
    pub left_root: Option<usize>,
    pub right_root: Option<usize>,
    pub verdict: Verdict,
    pub monotonicity: Monotonicity,
    /// Largest variation of the tangent angle over arclength windows of
    /// length `w_cone`, across recorded steps.
    pub max_cone_variation: f64,
    pub series: Vec<SeriesRecord>,
    /// Reports of the two pieces after a surgery.
    pub pieces: Vec<FlowReport>,
}

impl FlowReport {
    /// Verdicts of the leaves of the surgery tree, left to right.
    pub fn leaf_verdicts(&self) -> Vec<Verdict> {
        if self.pieces.is_empty() {
            vec![self.verdict]
        } else {
            self.pieces.iter().flat_map(|r| r.leaf_verdicts()).collect()
        }
    }

    pub fn last(&self) -> &SeriesRecord {
        self.series.last().expect("series has at least one record")
    }
}

/// Curve with its phase profile and weighted volume.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub curve: MarkedCurve,
    pub profile: PhaseProfile,
    pub volume: f64,
}

impl FlowState {
    pub fn new(curve: MarkedCurve, p: &ComplexPoly, n: usize) -> Result<Self, FlowError> {
        let profile = phase_profile(&curve, p, n)?;
        let volume = weighted_volume(&curve, p, n);
        Ok(FlowState { curve, profile, volume })
    }
}

/// Explicit step size `c_safety h^2 min(1 + |p'|^2 / (4|p|))`.
pub fn stable_dt(curve: &MarkedCurve, p: &ComplexPoly, num: &Numerics) -> f64 {
    let h = curve.mean_spacing();
    let m = curve.len();
    let min_g = curve.points[1..m - 1]
        .iter()
        .map(|&z| {
            let (v, dv) = p.eval_with_derivative(z);
            1.0 + dv.norm_sqr() / (4.0 * v.norm())
        })
        .fold(f64::INFINITY, f64::min);
    num.c_safety * h * h * min_g
}

/// Moves every sample by `dt * V * normal` without redistributing.
pub fn normal_step(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    dt: f64,
    num: &Numerics,
) -> Result<MarkedCurve, FlowError> {
    let field = velocity_field(curve, p, n, Formula::Result1, num)?;
    let mut next = curve.clone();
    let m = next.len();
    for k in 1..m - 1 {
        next.points[k] += field.normal[k] * (dt * field.speed[k]);
    }
    next.time += dt;
    Ok(next)
}

/// One Euler step from `state` followed by redistribution, with the
/// grading continued from the previous profile. Rejected when the phase
/// range widens or the weighted volume grows by more than `mp_tol`.
pub fn advance(state: &FlowState, p: &ComplexPoly, n: usize, dt: f64, num: &Numerics) -> Result<FlowState, FlowError> {
    let moved = normal_step(&state.curve, p, n, dt, num)?;
    let mut curve = moved.resample_count(state.curve.len());
    let profile = continue_grading(&mut curve, &state.profile, p, n)?;
    let volume = weighted_volume(&curve, p, n);
    if profile.sup > state.profile.sup + num.mp_tol {
        return Err(FlowError::StepRejected(format!(
            "sup theta rose by {:e}",
            profile.sup - state.profile.sup
        )));
    }
    if profile.inf < state.profile.inf - num.mp_tol {
        return Err(FlowError::StepRejected(format!(
            "inf theta fell by {:e}",
            state.profile.inf - profile.inf
        )));
    }
    if volume > state.volume + num.mp_tol {
        return Err(FlowError::StepRejected(format!("weighted volume rose by {:e}", volume - state.volume)));
    }
    Ok(FlowState { curve, profile, volume })
}

/// A single checked step of size `dt`.
pub fn step(curve: &MarkedCurve, p: &ComplexPoly, n: usize, dt: f64, num: &Numerics) -> Result<MarkedCurve, FlowError> {
    let state = FlowState::new(curve.clone(), p, n)?;
    Ok(advance(&state, p, n, dt, num)?.curve)
}

fn record(state: &FlowState, p: &ComplexPoly, n: usize, dt: f64, num: &Numerics) -> SeriesRecord {
    let (theta_bar, var) = phase_moments(&state.curve, p, n, &state.profile);
    let h = state.curve.mean_spacing();
    SeriesRecord {
        tau: state.curve.time,
        sup_theta: state.profile.sup,
        inf_theta: state.profile.inf,
        weighted_volume: state.volume,
        min_root_dist: state.curve.min_root_distance(p, num.end_guard * h).distance,
        max_curvature_dc: max_double_cover_curvature(&state.curve, p),
        dt,
        theta_bar,
        l2_phase_var: var,
    }
}

/// Observer invoked after every accepted step with the new state and the
/// step size used.
pub type StepObserver<'a> = dyn FnMut(&FlowState, f64) + 'a;

/// Runs the flow until convergence, surgery, failure or `tau_max`.
///
/// After a surgery both pieces are run concurrently; the returned curves are
/// the final curves of the leaves, in order along the original curve.
pub fn run(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    num: &Numerics,
) -> Result<(FlowReport, Vec<MarkedCurve>), FlowError> {
    run_observed(curve, p, n, num, &mut |_, _| {})
}

/// [`run`] with a per-step observer on the top-level curve (pieces after a
/// surgery are not observed).
pub fn run_observed(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    num: &Numerics,
    observer: &mut StepObserver<'_>,
) -> Result<(FlowReport, Vec<MarkedCurve>), FlowError> {
    run_inner(curve.clone(), p, n, num, num.max_surgeries, Some(observer))
}

fn run_inner(
    curve: MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    num: &Numerics,
    surgeries_left: usize,
    mut observer: Option<&mut StepObserver<'_>>,
) -> Result<(FlowReport, Vec<MarkedCurve>), FlowError> {
    let mut state = FlowState::new(curve, p, n)?;
    let mut mono = Monotonicity::default();
    let mut series = Vec::new();
    let mut dt = stable_dt(&state.curve, p, num);
    let mut max_cone = tangent_cone_variation(&state.curve, &state.profile, num.w_cone);
    series.push(record(&state, p, n, dt, num));
    let t0 = state.curve.time;
    let report = |verdict, series, mono, cone, pieces| FlowReport {
        dimension: n,
        left_root: None,
        right_root: None,
        verdict,
        monotonicity: mono,
        max_cone_variation: cone,
        series,
        pieces,
    };
    let mut steps = 0usize;
    loop {
        if state.profile.range() < num.conv_tol {
            break;
        }
        if state.curve.time - t0 >= num.tau_max || steps >= num.max_steps {
            let mut r = report(Verdict::MaxTime, series, mono, max_cone, vec![]);
            close_series(&mut r, &state, p, n, dt, num);
            return Ok(finish(r, &state.curve, vec![state.curve.clone()]));
        }
        if surgeries_left > 0 {
            if let Some((a, b)) = detect_and_split(&state.curve, p, n, num)? {
                let root = a.right_root.expect("split piece is pinned");
                let tau = state.curve.time;
                let (ra, rb) = std::thread::scope(|s| {
                    let ha = s.spawn(|| run_inner(a, p, n, num, surgeries_left - 1, None));
                    let rb = run_inner(b, p, n, num, surgeries_left - 1, None);
                    (ha.join().expect("piece thread panicked"), rb)
                });
                let (ra, mut ca) = ra?;
                let (rb, cb) = rb?;
                ca.extend(cb);
                let mut r = report(Verdict::SplitAt { root, tau }, series, mono, max_cone, vec![ra, rb]);
                close_series(&mut r, &state, p, n, dt, num);
                return Ok(finish(r, &state.curve, ca));
            }
        }
        dt = stable_dt(&state.curve, p, num);
        let next = loop {
            match advance(&state, p, n, dt, num) {
                Ok(s) => break Some(s),
                Err(FlowError::StepRejected(_)) => {
                    mono.rejected_steps += 1;
                    dt *= 0.5;
                    if dt < num.dt_min {
                        break None;
                    }
                }
                Err(FlowError::NearRoot { .. }) if surgeries_left > 0 => break None,
                Err(e) => return Err(e),
            }
        };
        let Some(next) = next else {
            let mut r = report(Verdict::StepFailure, series, mono, max_cone, vec![]);
            close_series(&mut r, &state, p, n, dt, num);
            return Ok(finish(r, &state.curve, vec![state.curve.clone()]));
        };
        mono.accepted_steps += 1;
        mono.max_sup_increase = worst(mono.max_sup_increase, next.profile.sup - state.profile.sup);
        mono.max_inf_decrease = worst(mono.max_inf_decrease, state.profile.inf - next.profile.inf);
        mono.max_volume_increase = worst(mono.max_volume_increase, next.volume - state.volume);
        state = next;
        steps += 1;
        if let Some(obs) = observer.as_deref_mut() {
            obs(&state, dt);
        }
        if steps % num.record_every.max(1) == 0 {
            series.push(record(&state, p, n, dt, num));
            max_cone = max_cone.max(tangent_cone_variation(&state.curve, &state.profile, num.w_cone));
        }
    }
    let mut r = report(Verdict::Converged, series, mono, max_cone, vec![]);
    close_series(&mut r, &state, p, n, dt, num);
    Ok(finish(r, &state.curve, vec![state.curve.clone()]))
}

fn close_series(r: &mut FlowReport, state: &FlowState, p: &ComplexPoly, n: usize, dt: f64, num: &Numerics) {
    if r.series.last().map(|s| s.tau) != Some(state.curve.time) {
        r.series.push(record(state, p, n, dt, num));
    }
}

fn finish(mut r: FlowReport, curve: &MarkedCurve, curves: Vec<MarkedCurve>) -> (FlowReport, Vec<MarkedCurve>) {
    r.left_root = curve.left_root;
    r.right_root = curve.right_root;
    (r, curves)
}
