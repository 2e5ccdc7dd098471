//! Phase, holomorphic-form weight, weighted volume and periods of curves.
//!
//! For a curve `gamma` between roots the Lagrangian sphere over it has phase
//! `theta = arg(gamma') + (n/2 - 1) arg p(gamma)`. Its weighted volume and
//! period reduce to the base integrals
//!
//! ```text
//! W = int |p|^((n-2)/2) |dt|,      P = int p^((n-2)/2) dt,
//! ```
//!
//! both with the sphere-volume constant dropped. Integrals are evaluated on
//! the polygon through the samples with Gauss–Legendre nodes per segment and
//! a square-root substitution on segments that end at a root.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::curve::MarkedCurve;
use crate::error::GeometryError;
use crate::chart::EndChart;
use crate::fd;
use crate::polynomial::{lift_args, nearest_lift, ComplexPoly, C};

/// Continuous lift of the phase along a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub values: Vec<f64>,
    /// Lifted tangent angle `arg(gamma')`.
    pub tangent_angle: Vec<f64>,
    /// Lifted `arg p(gamma)`.
    pub arg_p: Vec<f64>,
    pub sup: f64,
    pub inf: f64,
}

impl PhaseProfile {
    pub fn range(&self) -> f64 {
        self.sup - self.inf
    }
}

/// Period of a path and its graded phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodPhase {
    pub period: C,
    pub phi: f64,
    pub lift_window: [f64; 2],
}

/// Exponent `(n - 2) / 2` of `p` in the reduced holomorphic form.
pub fn form_exponent(n: usize) -> f64 {
    (n as f64 - 2.0) / 2.0
}

/// Density `|p|^((n-2)/2)` of the weighted measure per unit base arclength.
pub fn density(p: &ComplexPoly, n: usize, t: C) -> f64 {
    if n == 2 {
        1.0
    } else {
        p.eval(t).norm().powf(form_exponent(n))
    }
}

/// `|Omega / vol|` on the sphere over `t`: `1 / (2 sqrt(|p| + |p'|^2 / 4))`.
pub fn omega_weight(p: &ComplexPoly, _n: usize, t: C) -> Result<f64, GeometryError> {
    let (v, dv) = p.eval_with_derivative(t);
    let q = v.norm() + dv.norm_sqr() / 4.0;
    if q == 0.0 {
        return Err(GeometryError::WeightUndefined);
    }
    Ok(1.0 / (2.0 * q.sqrt()))
}

fn is_root_end(curve: &MarkedCurve, k: usize) -> bool {
    (k == 0 && curve.left_root.is_some()) || (k + 1 == curve.len() && curve.right_root.is_some())
}

/// Unit tangents from five-point (fourth-order) chord-length stencils.
pub(crate) fn phase_tangents(points: &[C]) -> Vec<C> {
    let s = fd::chord_params(points);
    let n = points.len();
    let width = n.min(5);
    (0..n)
        .map(|k| {
            let r = fd::stencil(k, n, width);
            let w = fd::fornberg5(s[k], &s[r.clone()]);
            let d: C = r.enumerate().map(|(j, idx)| points[idx] * w[1][j]).sum();
            d / d.norm()
        })
        .collect()
}

fn lift_from(values: &[C], base: usize, base_arg: f64) -> Result<Vec<f64>, (usize, f64)> {
    let map = |e| match e {
        crate::error::PolyError::BranchStep { index, jump } => (index, jump),
        _ => (0, PI),
    };
    let fwd = lift_args(&values[base..], Some(base_arg)).map_err(map)?;
    let mut back_vals: Vec<C> = values[..=base].to_vec();
    back_vals.reverse();
    let back = lift_args(&back_vals, Some(base_arg)).map_err(|e| {
        let (i, j) = map(e);
        (base - i - 1, j)
    })?;
    let mut out: Vec<f64> = back.into_iter().rev().collect();
    out.pop();
    out.extend(fwd.into_iter().map(|x| x));
    Ok(out)
}

fn loose_lift(values: &[C], base: usize, base_arg: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    out[base] = base_arg;
    for k in base + 1..values.len() {
        out[k] = nearest_lift(values[k].arg(), out[k - 1]);
    }
    for k in (0..base).rev() {
        out[k] = nearest_lift(values[k].arg(), out[k + 1]);
    }
    out
}

/// Unit tangents for the phase: five-point stencils in the interior and the
/// square-root chart on the samples next to a pinned endpoint.
pub fn curve_tangents(curve: &MarkedCurve) -> Vec<C> {
    let mut tangents = phase_tangents(&curve.points);
    let m = curve.len();
    if curve.left_root.is_some() {
        if let Some(ch) = EndChart::new(&curve.points, curve.points[0]) {
            for (k, t) in tangents.iter_mut().enumerate().take(3) {
                *t = ch.t_tangent(k);
            }
        }
    }
    if curve.right_root.is_some() {
        let rev: Vec<C> = curve.points.iter().rev().copied().collect();
        if let Some(ch) = EndChart::new(&rev, rev[0]) {
            for k in 0..3.min(m) {
                tangents[m - 1 - k] = -ch.t_tangent(k);
            }
        }
    }
    tangents
}

/// Pointwise phase `arg(gamma') + (n/2 - 1) arg p(gamma)`, continued from the
/// first interior point. At a pinned endpoint `arg p` is the limit taken
/// along the curve, `arg p'(z) + arg(direction into the curve)`.
pub fn phase_profile(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<PhaseProfile, GeometryError> {
    let m = curve.len();
    if m < 5 {
        return Err(crate::error::CurveError::TooFewPoints { got: m, need: 5 }.into());
    }
    let tangents = curve_tangents(curve);
    let base = 1;
    let tangent_angle = lift_from(&tangents, base, tangents[base].arg() + TAU * curve.grading_offset as f64)
        .map_err(|(index, jump)| GeometryError::LiftFailure { index, jump })?;

    let mut pv: Vec<C> = Vec::with_capacity(m);
    for (k, &z) in curve.points.iter().enumerate() {
        let v = p.eval(z);
        if is_root_end(curve, k) || v.norm() == 0.0 {
            let (_, dp) = p.eval_with_derivative(z);
            let dir = if k == 0 { tangents[0] } else { -tangents[m - 1] };
            pv.push(dp * dir);
        } else {
            pv.push(v);
        }
    }
    let arg_p = if n == 2 {
        // arg p does not enter the phase; continue it without a resolution check.
        loose_lift(&pv, base, pv[base].arg() + TAU * curve.sheet as f64)
    } else {
        lift_from(&pv, base, pv[base].arg() + TAU * curve.sheet as f64)
            .map_err(|(index, jump)| GeometryError::LiftFailure { index, jump })?
    };

    let factor = n as f64 / 2.0 - 1.0;
    let values: Vec<f64> = tangent_angle.iter().zip(&arg_p).map(|(a, b)| a + factor * b).collect();
    let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PhaseProfile { values, tangent_angle, arg_p, sup, inf })
}

/// Shifts the grading of `curve` so that its lifts at sample `at` continue
/// the given lifts; returns the regraded profile.
pub fn align_grading(
    curve: &mut MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    at: usize,
    tangent_angle: f64,
    arg_p: f64,
) -> Result<PhaseProfile, GeometryError> {
    let mut prof = phase_profile(curve, p, n)?;
    let dt = ((tangent_angle - prof.tangent_angle[at]) / TAU).round();
    let da = ((arg_p - prof.arg_p[at]) / TAU).round();
    if dt != 0.0 || da != 0.0 {
        curve.grading_offset += dt as i64;
        curve.sheet += da as i64;
        let factor = n as f64 / 2.0 - 1.0;
        let shift = TAU * (dt + factor * da);
        prof.tangent_angle.iter_mut().for_each(|v| *v += TAU * dt);
        prof.arg_p.iter_mut().for_each(|v| *v += TAU * da);
        prof.values.iter_mut().for_each(|v| *v += shift);
        prof.sup += shift;
        prof.inf += shift;
    }
    Ok(prof)
}

/// Regrades `curve` to continue the lifts of `prev` at the first interior
/// point; returns the new profile.
pub fn continue_grading(
    curve: &mut MarkedCurve,
    prev: &PhaseProfile,
    p: &ComplexPoly,
    n: usize,
) -> Result<PhaseProfile, GeometryError> {
    align_grading(curve, p, n, 1, prev.tangent_angle[1], prev.arg_p[1])
}

/// Chooses the grading whose weighted mean phase is closest to `target`.
pub fn grade_near(curve: &mut MarkedCurve, p: &ComplexPoly, n: usize, target: f64) -> Result<(), GeometryError> {
    let prof = phase_profile(curve, p, n)?;
    let (mean, _) = phase_moments(curve, p, n, &prof);
    let delta = target - mean;
    let sheet_step = (n as f64 - 2.0) * PI;
    let mut best = (f64::INFINITY, 0i64, 0i64);
    for s in -2i64..=2 {
        let rest = delta - sheet_step * s as f64;
        let o = (rest / TAU).round();
        let resid = (rest - TAU * o).abs() + 1e-9 * s.abs() as f64;
        if resid < best.0 {
            best = (resid, s, o as i64);
        }
        if n % 2 == 0 {
            break;
        }
    }
    curve.sheet += best.1;
    curve.grading_offset += best.2;
    Ok(())
}

/// Gauss nodes `(t, dt-weight)` on the polygon through `points`; segments
/// touching a root endpoint use the square-root substitution.
fn polygon_nodes(points: &[C], root_start: bool, root_end: bool) -> Vec<(usize, C, C)> {
    let last = points.len() - 2;
    let mut nodes = Vec::with_capacity(8 * points.len());
    for (k, w) in points.windows(2).enumerate() {
        let sa = k == 0 && root_start;
        let sb = k == last && root_end;
        nodes.extend(fd::segment_nodes(w[0], w[1], sa, sb).into_iter().map(|(t, wt)| (k, t, wt)));
    }
    nodes
}

/// `int |p|^((n-2)/2) |dt|` along the curve.
pub fn weighted_volume(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> f64 {
    if n == 2 {
        return curve.length();
    }
    let e = form_exponent(n);
    polygon_nodes(&curve.points, curve.left_root.is_some(), curve.right_root.is_some())
        .into_iter()
        .map(|(_, t, w)| p.eval(t).norm().powf(e) * w.norm())
        .sum()
}

/// `int p^((n-2)/2) dt` along a path whose ends may be roots; the branch is
/// continued from `start_arg` (a lift of `arg p` at `path[1]`).
pub fn period_along(path: &[C], p: &ComplexPoly, n: usize, start_arg: f64) -> Result<C, GeometryError> {
    if n == 2 {
        return Ok(path[path.len() - 1] - path[0]);
    }
    let m = path.len();
    let tiny = |z: C| p.eval(z).norm() <= 1e-300 || p.nearest_root(z).0 == 0.0;
    let root_start = tiny(path[0]);
    let root_end = tiny(path[m - 1]);
    let lo = if root_start { 1 } else { 0 };
    let hi = if root_end { m - 1 } else { m };
    let interior: Vec<C> = path[lo..hi].iter().map(|&z| p.eval(z)).collect();
    let lifted = lift_args(&interior, Some(start_arg)).map_err(GeometryError::from)?;
    let vertex_arg = |k: usize| -> f64 {
        let idx = k.clamp(lo, hi - 1) - lo;
        lifted[idx]
    };
    let e = form_exponent(n);
    let mut total = C::new(0.0, 0.0);
    for (k, t, w) in polygon_nodes(path, root_start, root_end) {
        let reference = if root_start && k == 0 { vertex_arg(1) } else { vertex_arg(k) };
        let v = p.eval(t);
        if v.norm() == 0.0 {
            continue;
        }
        let a = nearest_lift(v.arg(), reference);
        total += C::from_polar(v.norm().powf(e), e * a) * w;
    }
    Ok(total)
}

/// Weighted mean phase and weighted L2 variance, with the measure
/// `|Omega| vol` restricted to the curve (`(1/2) |p|^((n-2)/2) ds_base`).
pub fn phase_moments(curve: &MarkedCurve, p: &ComplexPoly, n: usize, prof: &PhaseProfile) -> (f64, f64) {
    let rho: Vec<f64> = curve.points.iter().map(|&z| 0.5 * density(p, n, z)).collect();
    let mut mass = 0.0;
    let mut first = 0.0;
    for (k, w) in curve.points.windows(2).enumerate() {
        let ds = (w[1] - w[0]).norm();
        mass += 0.5 * ds * (rho[k] + rho[k + 1]);
        first += 0.5 * ds * (rho[k] * prof.values[k] + rho[k + 1] * prof.values[k + 1]);
    }
    let mean = first / mass;
    let mut var = 0.0;
    for (k, w) in curve.points.windows(2).enumerate() {
        let ds = (w[1] - w[0]).norm();
        let a = prof.values[k] - mean;
        let b = prof.values[k + 1] - mean;
        var += 0.5 * ds * (rho[k] * a * a + rho[k + 1] * b * b);
    }
    (mean, var)
}

/// Period of the curve with its own grading; `phi` is the lift of
/// `arg(period)` nearest the weighted mean phase.
pub fn period_and_phase(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<PeriodPhase, GeometryError> {
    let prof = phase_profile(curve, p, n)?;
    let (mean, _) = phase_moments(curve, p, n, &prof);
    let period = period_along(&curve.points, p, n, prof.arg_p[1])?;
    Ok(graded(period, mean))
}

/// Graded phase of `period` lifted into the window `[reference - pi, reference + pi)`.
pub fn graded(period: C, reference: f64) -> PeriodPhase {
    let phi = nearest_lift(period.arg(), reference);
    PeriodPhase { period, phi, lift_window: [reference - PI, reference + PI] }
}

/// Largest variation of `arg(gamma')` over any arclength window of length
/// `window`; stays below pi when no hairpin kinks form.
pub fn tangent_cone_variation(curve: &MarkedCurve, prof: &PhaseProfile, window: f64) -> f64 {
    let s = fd::chord_params(&curve.points);
    let mut worst: f64 = 0.0;
    let mut j = 0;
    for i in 0..s.len() {
        while j < s.len() && s[j] - s[i] <= window {
            j += 1;
        }
        let slice = &prof.tangent_angle[i..j];
        let hi = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = slice.iter().copied().fold(f64::INFINITY, f64::min);
        worst = worst.max(hi - lo);
    }
    worst
}

/// Half-turn resolution check used by callers that need a resolved curve.
pub fn is_resolved(prof: &PhaseProfile) -> bool {
    prof.values.windows(2).all(|w| (w[1] - w[0]).abs() < FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Numerics;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn quad() -> ComplexPoly {
        ComplexPoly::from_roots(&[c(-1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), &Numerics::default()).unwrap()
    }

    #[test]
    fn segment_phase_n2_and_n3() {
        let seg = MarkedCurve::segment(&quad(), 0, 1, 101).unwrap();
        let p2 = phase_profile(&seg, &quad(), 2).unwrap();
        assert!(p2.values.iter().all(|v| v.abs() < 1e-14));
        let p3 = phase_profile(&seg, &quad(), 3).unwrap();
        for v in &p3.values {
            assert!((v - FRAC_PI_2).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn quarter_circle_phase_variation() {
        let p = ComplexPoly::from_roots(&[c(10.0, 0.0), c(-10.0, 0.0)], c(1.0, 0.0), &Numerics::default()).unwrap();
        let pts = (0..=200).map(|k| C::from_polar(1.0, FRAC_PI_2 * k as f64 / 200.0)).collect();
        let curve = MarkedCurve { points: pts, left_root: None, right_root: None, time: 0.0, grading_offset: 0, sheet: 0 };
        let prof = phase_profile(&curve, &p, 2).unwrap();
        assert!((prof.range() - FRAC_PI_2).abs() < 1e-8, "{}", prof.range());
    }

    #[test]
    fn omega_weight_examples() {
        let p = quad();
        assert!((omega_weight(&p, 3, c(0.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((omega_weight(&p, 3, c(1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        let p4 = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(1.0, 0.0)], c(4.0, 0.0), &Numerics::default()).unwrap();
        // |4p| = 4 and p' = 0 at t = 0
        assert!((omega_weight(&p4, 3, c(0.0, 0.0)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn weighted_volume_examples() {
        let seg = MarkedCurve::segment(&quad(), 0, 1, 201).unwrap();
        assert!((weighted_volume(&seg, &quad(), 2) - 2.0).abs() < 1e-14);
        assert!((weighted_volume(&seg, &quad(), 4) - 4.0 / 3.0).abs() < 1e-12);
        // int_{-1}^{1} sqrt(1 - t^2) dt = pi / 2
        assert!((weighted_volume(&seg, &quad(), 3) - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn periods_on_segment() {
        let p = quad();
        let seg = MarkedCurve::segment(&p, 0, 1, 201).unwrap();
        let pp = period_and_phase(&seg, &p, 2).unwrap();
        assert!((pp.period - c(2.0, 0.0)).norm() < 1e-14 && pp.phi.abs() < 1e-14);
        let pp = period_and_phase(&seg, &p, 4).unwrap();
        assert!((pp.period - c(-4.0 / 3.0, 0.0)).norm() < 1e-12);
        let pp = period_and_phase(&seg, &p, 3).unwrap();
        assert!((pp.period - c(0.0, FRAC_PI_2)).norm() < 1e-9, "{:?}", pp.period);
        assert!((pp.phi - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn volume_dominates_period() {
        let p = quad();
        for n in 2..=5 {
            for bulge in [0.1, -0.3, 0.8] {
                let arc = MarkedCurve::arc(&p, 0, 1, bulge, 301).unwrap();
                let w = weighted_volume(&arc, &p, n);
                let pp = period_and_phase(&arc, &p, n).unwrap();
                assert!(w > pp.period.norm() * (1.0 + 1e-6), "n={n} bulge={bulge}");
            }
        }
    }

    #[test]
    fn grade_near_moves_by_pi_for_odd_n() {
        let p = quad();
        let mut seg = MarkedCurve::segment(&p, 0, 1, 101).unwrap();
        grade_near(&mut seg, &p, 3, -FRAC_PI_2).unwrap();
        let prof = phase_profile(&seg, &p, 3).unwrap();
        assert!((prof.values[50] + FRAC_PI_2).abs() < 1e-12);
    }
}
