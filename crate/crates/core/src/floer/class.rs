use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::curve::MarkedCurve;
use crate::error::FloerError;
use crate::geometry::{density, period_along, period_and_phase};
use crate::polynomial::{lift_args, nearest_lift, ComplexPoly, C};

/// Signed number of turns around one root.
pub type Winding = (usize, i64);

/// A graded Lagrangian class over the base: the roots it joins, how it winds
/// around the other roots relative to the straight chord, its period and its
/// graded phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagClass {
    pub n: usize,
    pub root_pair: (usize, usize),
    /// Sorted by root, zero entries omitted.
    pub winding: Vec<Winding>,
    pub period: C,
    pub phi: f64,
}

/// Turns of the closed polygon `path` around `z`.
pub fn winding_number(path: &[C], z: C) -> f64 {
    let m = path.len();
    (0..m).map(|k| ((path[(k + 1) % m] - z) / (path[k] - z)).arg()).sum::<f64>() / TAU
}

/// Normalised winding list: sorted, merged, zeros dropped.
pub(crate) fn normalise(mut w: Vec<Winding>) -> Vec<Winding> {
    w.sort_by_key(|&(r, _)| r);
    let mut out: Vec<Winding> = Vec::new();
    for (r, m) in w {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += m,
            _ => out.push((r, m)),
        }
    }
    out.retain(|&(_, m)| m != 0);
    out
}

pub(crate) fn turns(w: &[Winding], root: usize) -> i64 {
    w.iter().find(|&&(r, _)| r == root).map_or(0, |&(_, m)| m)
}

/// Lift of `arg p` at the first interior sample of a class representative.
#[derive(Debug, Clone)]
pub(crate) struct Representative {
    pub start_arg: f64,
}

impl LagClass {
    /// The class of a curve pinned at both ends. Windings are measured
    /// against the chord between the end roots.
    pub fn of_curve(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<LagClass, FloerError> {
        let (Some(a), Some(b)) = (curve.left_root, curve.right_root) else {
            return Err(FloerError::Unpinned);
        };
        let mut loop_path = curve.points.clone();
        loop_path.pop();
        let (za, zb) = (curve.points[0], curve.points[curve.len() - 1]);
        let back = chord(zb, za, 64);
        loop_path.extend_from_slice(&back[..back.len() - 1]);
        let winding = (0..p.degree())
            .filter(|&r| r != a && r != b)
            .map(|r| (r, winding_number(&loop_path, p.roots()[r]).round() as i64))
            .collect();
        let pp = period_and_phase(curve, p, n)?;
        Ok(LagClass { n, root_pair: (a, b), winding: normalise(winding), period: pp.period, phi: pp.phi })
    }

    /// The class of the straight chord between two roots, graded by the
    /// weighted mean of its phase.
    pub fn chord(p: &ComplexPoly, n: usize, a: usize, b: usize) -> Result<LagClass, FloerError> {
        LagClass::with_winding(p, n, a, b, Vec::new())
    }

    /// The class of the chord from `a` to `b` with lassos around the roots in
    /// `winding`.
    pub fn with_winding(p: &ComplexPoly, n: usize, a: usize, b: usize, winding: Vec<Winding>) -> Result<LagClass, FloerError> {
        let winding = normalise(winding);
        let path = lasso_path(p, a, b, &winding)?;
        let (za, zb) = (p.roots()[a], p.roots()[b]);
        let (_, dp) = p.eval_with_derivative(za);
        let start_arg = nearest_lift(p.eval(path[1]).arg(), dp.arg() + (zb - za).arg());
        let period = period_along(&path, p, n, start_arg)?;
        let inner = &path[1..path.len() - 1];
        let args = lift_args(&values(p, inner), Some(start_arg))?;
        let mean = mean_phase(p, n, inner, &args, (zb - za).arg());
        Ok(LagClass { n, root_pair: (a, b), winding, period, phi: nearest_lift(period.arg(), mean) })
    }

    /// Cohomological volume `|period|`.
    pub fn volume(&self) -> f64 {
        self.period.norm()
    }

    /// A representative path whose period matches the class; for odd `n`
    /// this fixes the sheet of the branch at the start.
    pub(crate) fn representative(&self, p: &ComplexPoly) -> Result<(Representative, f64), FloerError> {
        let (a, b) = self.root_pair;
        let path = lasso_path(p, a, b, &self.winding)?;
        let (za, zb) = (p.roots()[a], p.roots()[b]);
        let (_, dp) = p.eval_with_derivative(za);
        let mut start_arg = nearest_lift(p.eval(path[1]).arg(), dp.arg() + (zb - za).arg());
        let mut period = period_along(&path, p, self.n, start_arg)?;
        if self.n % 2 == 1 {
            let flipped = period_along(&path, p, self.n, start_arg + TAU)?;
            if (flipped - self.period).norm() < (period - self.period).norm() {
                start_arg += TAU;
                period = flipped;
            }
        }
        let inner = &path[1..path.len() - 1];
        let args = lift_args(&values(p, inner), Some(start_arg))?;
        let mean = mean_phase(p, self.n, inner, &args, (zb - za).arg());
        let phi = nearest_lift(period.arg(), mean);
        // Shift that carries the chord-tangent grading onto the class grading.
        let offset = TAU * ((self.phi - phi) / TAU).round();
        Ok((Representative { start_arg }, offset))
    }
}

pub(crate) fn values(p: &ComplexPoly, path: &[C]) -> Vec<C> {
    path.iter().map(|&z| p.eval(z)).collect()
}

/// Weighted mean of `tangent + (n/2 - 1) arg p` over the samples, with the
/// density `|p|^((n-2)/2) ds`.
pub(crate) fn mean_phase(p: &ComplexPoly, n: usize, path: &[C], args: &[f64], tangent: f64) -> f64 {
    let half = n as f64 / 2.0 - 1.0;
    let mut mass = 0.0;
    let mut first = 0.0;
    for k in 0..path.len() {
        let ds = if k + 1 < path.len() { (path[k + 1] - path[k]).norm() } else { 0.0 }
            + if k > 0 { (path[k] - path[k - 1]).norm() } else { 0.0 };
        let w = density(p, n, path[k]) * ds;
        mass += w;
        first += w * (tangent + half * args[k]);
    }
    first / mass
}

/// Uniform samples from `a` to `b`, both included.
pub(crate) fn chord(a: C, b: C, count: usize) -> Vec<C> {
    let mut out: Vec<C> = (0..count).map(|k| a + (b - a) * (k as f64 / count as f64)).collect();
    out.push(b);
    out
}

/// Samples of the chord from root `a` to root `b`, fine enough to resolve
/// `arg p` near the other roots.
pub(crate) fn sampled_chord(p: &ComplexPoly, a: usize, b: usize) -> Result<Vec<C>, FloerError> {
    let (za, zb) = (p.roots()[a], p.roots()[b]);
    let len = (zb - za).norm();
    let mut clearance = f64::INFINITY;
    for (r, &z) in p.roots().iter().enumerate() {
        if r == a || r == b {
            continue;
        }
        let u = (((z - za) * (zb - za).conj()).re / (len * len)).clamp(0.0, 1.0);
        let d = (z - (za + (zb - za) * u)).norm();
        if d < 1e-9 * len {
            return Err(FloerError::ChordThroughRoot(r));
        }
        clearance = clearance.min(d);
    }
    let h = (len / 400.0).min(clearance / 8.0);
    Ok(chord(za, zb, (len / h).ceil() as usize))
}

/// The chord from `a` to `b` with a lasso around each root in `winding`,
/// attached at the chord sample closest to that root.
pub(crate) fn lasso_path(p: &ComplexPoly, a: usize, b: usize, winding: &[Winding]) -> Result<Vec<C>, FloerError> {
    let base = sampled_chord(p, a, b)?;
    let mut attach: Vec<(usize, usize, i64)> = winding
        .iter()
        .map(|&(r, m)| {
            let z = p.roots()[r];
            let q = (1..base.len() - 1)
                .min_by(|&i, &j| (base[i] - z).norm().total_cmp(&(base[j] - z).norm()))
                .unwrap_or(1);
            (q, r, m)
        })
        .collect();
    attach.sort();
    let mut out = Vec::with_capacity(base.len());
    let mut next = attach.iter().peekable();
    for (i, &z) in base.iter().enumerate() {
        out.push(z);
        while let Some(&&(q, r, m)) = next.peek() {
            if q != i {
                break;
            }
            next.next();
            out.extend(lasso(p, z, r, m));
            out.push(z);
        }
    }
    Ok(out)
}

/// Stem from `from` toward root `r`, `m` turns around it, and back (the
/// return to `from` itself is left to the caller).
fn lasso(p: &ComplexPoly, from: C, r: usize, m: i64) -> Vec<C> {
    let z = p.roots()[r];
    let dist = (from - z).norm();
    let rho = (0.3 * p.local_separation(r)).min(0.5 * dist);
    let u = (from - z) / dist;
    let stem_len = dist - rho;
    // Steps stay small against the distance to every root, so the stem can
    // leave a chord sample right next to an end root.
    let mut stem = Vec::new();
    let mut travelled = 0.0;
    while travelled < stem_len {
        let here = from - u * travelled;
        let clear = p.nearest_root(here).0;
        travelled = (travelled + (clear / 8.0).min(rho / 8.0)).min(stem_len);
        stem.push(from - u * travelled);
    }
    let per_turn = 64;
    let total = per_turn * m.unsigned_abs() as usize;
    let sign = m.signum() as f64;
    let mut out = stem.clone();
    for k in 1..=total {
        out.push(z + u * C::from_polar(rho, sign * TAU * k as f64 / per_turn as f64));
    }
    out.extend(stem.iter().rev().skip(1));
    out
}
