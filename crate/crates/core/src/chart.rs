//! Square-root chart `w = sqrt(t - z)` at a pinned root.
//!
//! The double cover is smooth over a simple root, so quantities that are
//! singular in `t` near a pinned endpoint are computed in `w` on the sequence
//! reflected through the root, `(-w_K, .., -w_1, 0, w_1, .., w_K)`.

use crate::fd;
use crate::polynomial::C;

/// Number of curve samples (beyond the root) carried by a chart.
pub const DEPTH: usize = 5;

pub struct EndChart {
    pub root: C,
    /// `w[0] = 0`, `w[k] = sqrt(points[k] - root)` on a continuous branch.
    pub w: Vec<C>,
    reflected: Vec<C>,
    s: Vec<f64>,
}

impl EndChart {
    /// Chart at the start of `points` (which must begin at `root`).
    pub fn new(points: &[C], root: C) -> Option<Self> {
        let depth = DEPTH.min(points.len().saturating_sub(1));
        if depth < 2 {
            return None;
        }
        let mut w = vec![C::new(0.0, 0.0)];
        for k in 1..=depth {
            let v = (points[k] - root).sqrt();
            let v = match w.last() {
                Some(prev) if k > 1 && (v - prev).norm() > (v + prev).norm() => -v,
                _ => v,
            };
            w.push(v);
        }
        let mut reflected: Vec<C> = w[1..].iter().rev().map(|v| -v).collect();
        reflected.extend(w.iter().copied());
        let s = fd::chord_params(&reflected);
        Some(EndChart { root, w, reflected, s })
    }

    fn centre(&self, k: usize) -> usize {
        self.w.len() - 1 + k
    }

    /// First and second `w`-arclength derivatives at chart sample `k`.
    pub fn derivatives(&self, k: usize) -> (C, C) {
        let i = self.centre(k);
        let r = fd::stencil(i, self.reflected.len(), 5);
        let wts = fd::fornberg5(self.s[i], &self.s[r.clone()]);
        let mut d1 = C::new(0.0, 0.0);
        let mut d2 = C::new(0.0, 0.0);
        for (j, idx) in r.enumerate() {
            d1 += self.reflected[idx] * wts[1][j];
            d2 += self.reflected[idx] * wts[2][j];
        }
        (d1, d2)
    }

    /// Unit tangent of the `t`-curve at chart sample `k`, oriented away from
    /// the root.
    pub fn t_tangent(&self, k: usize) -> C {
        let (d1, _) = self.derivatives(k);
        let v = if k == 0 { d1 * d1 } else { self.w[k] * d1 };
        v / v.norm()
    }
}
