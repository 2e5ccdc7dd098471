//! Discrete curves in the base plane with endpoints pinned to roots of `p`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::CurveError;
use crate::fd;
use crate::polynomial::{ComplexPoly, C};

/// A sampled curve `z_0 .. z_N` in the `t`-plane.
///
/// `grading_offset` shifts the phase lift by `2 pi * grading_offset`; `sheet`
/// selects the lift `arg p + 2 pi * sheet` at the first interior point. The
/// two together fix the grading of the Lagrangian over the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedCurve {
    pub points: Vec<C>,
    pub left_root: Option<usize>,
    pub right_root: Option<usize>,
    pub time: f64,
    pub grading_offset: i64,
    #[serde(default)]
    pub sheet: i64,
}

/// Per-point tangent, normal and signed curvature.
#[derive(Debug, Clone)]
pub struct DiffQuantities {
    /// Cumulative chord length.
    pub s: Vec<f64>,
    pub tangent: Vec<C>,
    /// Always `i * tangent`.
    pub normal: Vec<C>,
    /// Positive when the curve bends toward `normal`.
    pub curvature: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootProximity {
    pub distance: f64,
    pub root: usize,
    pub index: usize,
}

impl MarkedCurve {
    /// A curve pinned to the given roots. The end samples are overwritten by
    /// the exact root positions.
    pub fn pinned(
        mut points: Vec<C>,
        p: &ComplexPoly,
        left: Option<usize>,
        right: Option<usize>,
    ) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooFewPoints { got: points.len(), need: 2 });
        }
        if let Some(i) = left {
            points[0] = p.root(i).ok_or(CurveError::BadRoot(i))?;
        }
        if let Some(i) = right {
            let last = points.len() - 1;
            points[last] = p.root(i).ok_or(CurveError::BadRoot(i))?;
        }
        Ok(MarkedCurve { points, left_root: left, right_root: right, time: 0.0, grading_offset: 0, sheet: 0 })
    }

    /// Straight segment between roots `a` and `b` with `n` points.
    pub fn segment(p: &ComplexPoly, a: usize, b: usize, n: usize) -> Result<Self, CurveError> {
        Self::parametric(p, a, b, n, |_| 0.0)
    }

    /// Circular arc between roots `a` and `b` with signed sagitta `bulge`
    /// (positive bulges to the left of the chord `a -> b`).
    pub fn arc(p: &ComplexPoly, a: usize, b: usize, bulge: f64, n: usize) -> Result<Self, CurveError> {
        let za = p.root(a).ok_or(CurveError::BadRoot(a))?;
        let zb = p.root(b).ok_or(CurveError::BadRoot(b))?;
        if bulge == 0.0 {
            return Self::segment(p, a, b, n);
        }
        let half = (zb - za).norm() / 2.0;
        let h = bulge.abs();
        let radius = (half * half + h * h) / (2.0 * h);
        let dir = (zb - za) / (2.0 * half);
        let left = C::new(0.0, 1.0) * dir * bulge.signum();
        let mid = (za + zb) / 2.0;
        let centre = mid + left * (h - radius);
        let a0 = (za - centre).arg();
        let mut sweep = (zb - centre).arg() - a0;
        // The arc passes through mid + left * h.
        let apex = ((mid + left * h) - centre).arg() - a0;
        let wrap = |x: f64| (x + 2.0 * PI) % (2.0 * PI);
        if wrap(apex) > wrap(sweep) {
            sweep = wrap(sweep) - 2.0 * PI;
        } else {
            sweep = wrap(sweep);
        }
        let pts = (0..n)
            .map(|k| centre + C::from_polar(radius, a0 + sweep * k as f64 / (n - 1) as f64))
            .collect();
        Self::pinned(pts, p, Some(a), Some(b))
    }

    /// Free cubic Bezier curve through `count` parameter-uniform samples.
    pub fn bezier(control: [C; 4], count: usize) -> Self {
        let points = (0..count)
            .map(|k| {
                let u = k as f64 / (count - 1) as f64;
                let v = 1.0 - u;
                control[0] * (v * v * v)
                    + control[1] * (3.0 * v * v * u)
                    + control[2] * (3.0 * v * u * u)
                    + control[3] * (u * u * u)
            })
            .collect();
        MarkedCurve { points, left_root: None, right_root: None, time: 0.0, grading_offset: 0, sheet: 0 }
    }

    /// Segment `a -> b` displaced along its left normal by `amplitude * sin(pi u)`.
    pub fn sine_bump(p: &ComplexPoly, a: usize, b: usize, amplitude: f64, n: usize) -> Result<Self, CurveError> {
        Self::parametric(p, a, b, n, |u| amplitude * (PI * u).sin())
    }

    fn parametric(
        p: &ComplexPoly,
        a: usize,
        b: usize,
        n: usize,
        offset: impl Fn(f64) -> f64,
    ) -> Result<Self, CurveError> {
        let za = p.root(a).ok_or(CurveError::BadRoot(a))?;
        let zb = p.root(b).ok_or(CurveError::BadRoot(b))?;
        let d = zb - za;
        let nrm = C::new(0.0, 1.0) * d / d.norm();
        let pts = (0..n)
            .map(|k| {
                let u = k as f64 / (n - 1) as f64;
                za + d * u + nrm * offset(u)
            })
            .collect();
        Self::pinned(pts, p, Some(a), Some(b))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn mean_spacing(&self) -> f64 {
        self.length() / (self.len() - 1) as f64
    }

    /// Tangent, normal and curvature from second-order finite differences in
    /// chord length: three-point centred stencils inside, four-point one-sided
    /// stencils at the two ends.
    pub fn differential_quantities(&self, n_min: usize) -> Result<DiffQuantities, CurveError> {
        let n = self.len();
        let need = n_min.max(5);
        if n < need {
            return Err(CurveError::TooFewPoints { got: n, need });
        }
        let s = fd::chord_params(&self.points);
        if s[n - 1] <= 0.0 {
            return Err(CurveError::ZeroLength);
        }
        let mut tangent = Vec::with_capacity(n);
        let mut curvature = Vec::with_capacity(n);
        for k in 0..n {
            let width = if k == 0 || k == n - 1 { 4 } else { 3 };
            let r = fd::stencil(k, n, width);
            let w = fd::fornberg5(s[k], &s[r.clone()]);
            let mut d1 = C::new(0.0, 0.0);
            let mut d2 = C::new(0.0, 0.0);
            for (j, idx) in r.enumerate() {
                d1 += self.points[idx] * w[1][j];
                d2 += self.points[idx] * w[2][j];
            }
            let speed = d1.norm();
            tangent.push(d1 / speed);
            curvature.push((d1.conj() * d2).im / (speed * speed * speed));
        }
        let normal = tangent.iter().map(|t| C::new(-t.im, t.re)).collect();
        Ok(DiffQuantities { s, tangent, normal, curvature })
    }

    /// Redistributes points uniformly in arclength at spacing close to
    /// `target_h`, using local cubic interpolation. Endpoints are unchanged.
    pub fn resample(&self, target_h: f64, n_min: usize) -> MarkedCurve {
        let total = self.length();
        let segments = ((total / target_h).round() as usize).max(n_min.max(2) - 1);
        self.resample_count(segments + 1)
    }

    /// Redistributes onto exactly `count` points.
    pub fn resample_count(&self, count: usize) -> MarkedCurve {
        let s = fd::chord_params(&self.points);
        let total = *s.last().unwrap();
        let last = self.points.len() - 1;
        let mut pts = Vec::with_capacity(count);
        pts.push(self.points[0]);
        for j in 1..count - 1 {
            let x = total * j as f64 / (count - 1) as f64;
            pts.push(fd::cubic_at(&s, &self.points, x));
        }
        pts.push(self.points[last]);
        MarkedCurve { points: pts, ..self.clone() }
    }

    /// Closest approach of an interior point to any root, ignoring the pinned
    /// endpoint roots within arclength `end_guard` of their own endpoint.
    pub fn min_root_distance(&self, p: &ComplexPoly, end_guard: f64) -> RootProximity {
        let s = fd::chord_params(&self.points);
        let total = *s.last().unwrap();
        let mut best = RootProximity { distance: f64::INFINITY, root: 0, index: 0 };
        let n = self.points.len();
        for k in 1..n.saturating_sub(1) {
            for (r, &z) in p.roots().iter().enumerate() {
                if self.left_root == Some(r) && s[k] < end_guard {
                    continue;
                }
                if self.right_root == Some(r) && total - s[k] < end_guard {
                    continue;
                }
                let d = (self.points[k] - z).norm();
                if d < best.distance {
                    best = RootProximity { distance: d, root: r, index: k };
                }
            }
        }
        best
    }

    /// Reversed orientation; the grading is not adjusted.
    pub fn reversed(&self) -> MarkedCurve {
        let mut points = self.points.clone();
        points.reverse();
        MarkedCurve { points, left_root: self.right_root, right_root: self.left_root, ..self.clone() }
    }
}

/// Distance from `z` to the polyline `path`.
pub fn distance_to_polyline(z: C, path: &[C]) -> f64 {
    if path.len() == 1 {
        return (z - path[0]).norm();
    }
    path.windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            let len2 = d.norm_sqr();
            let t = if len2 > 0.0 { ((z - w[0]) * d.conj()).re / len2 } else { 0.0 };
            (z - (w[0] + d * t.clamp(0.0, 1.0))).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two polylines (vertex-to-polyline).
pub fn hausdorff(a: &[C], b: &[C]) -> f64 {
    let ab = a.iter().map(|&z| distance_to_polyline(z, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|&z| distance_to_polyline(z, a)).fold(0.0, f64::max);
    ab.max(ba)
}
