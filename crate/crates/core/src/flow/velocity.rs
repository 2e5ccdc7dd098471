use serde::{Deserialize, Serialize};

use crate::chart::EndChart;
use crate::curve::MarkedCurve;
use crate::error::FlowError;
use crate::numerics::Numerics;
use crate::polynomial::{ComplexPoly, C};

/// Which of the equivalent expressions of the reduced flow to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formula {
    /// `V = [kappa + (1 - n/2) d_n log|p|] / (1 + |p'|^2 / (4|p|))`.
    Result1,
    /// `V = (f/g) (kappa - d_n log g / 2)` with `g = |p|^(n-2)`,
    /// `f = |p|^(n-1) / (|p| + |p'|^2/4)`.
    Conformal,
    /// Mean curvature on the double cover plus the two log-gradient terms,
    /// pulled back through the conformal factor of the cover.
    DoubleCover,
}

/// Normal speeds together with the normals they multiply.
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub speed: Vec<f64>,
    pub normal: Vec<C>,
}

/// Derivatives of `log|p|`, `|p'|^2` along a unit direction at `z`.
struct Local {
    abs_p: f64,
    abs_dp2: f64,
    dn_log_p: f64,
    dn_dp2: f64,
}

fn local(p: &ComplexPoly, z: C, normal: C) -> Local {
    let (v, dv, ddv) = p.eval2(z);
    Local {
        abs_p: v.norm(),
        abs_dp2: dv.norm_sqr(),
        dn_log_p: (dv * normal / v).re,
        dn_dp2: 2.0 * (dv.conj() * ddv * normal).re,
    }
}

/// Normal speed at a single point with unit normal `normal` and curvature
/// `kappa`, using analytic `p`, `p'`, `p''`.
pub fn normal_speed(formula: Formula, p: &ComplexPoly, n: usize, z: C, normal: C, kappa: f64) -> f64 {
    let l = local(p, z, normal);
    let nf = n as f64;
    match formula {
        Formula::Result1 => {
            let g = 1.0 + l.abs_dp2 / (4.0 * l.abs_p);
            (kappa + (1.0 - nf / 2.0) * l.dn_log_p) / g
        }
        Formula::Conformal => {
            let g = l.abs_p.powf(nf - 2.0);
            let dn_log_g = (nf - 2.0) * l.dn_log_p;
            let f = l.abs_p.powf(nf - 1.0) / (l.abs_p + l.abs_dp2 / 4.0);
            f / g * (kappa - 0.5 * dn_log_g)
        }
        Formula::DoubleCover => {
            let q = l.abs_p + l.abs_dp2 / 4.0;
            let dn_log_q = (l.abs_p * l.dn_log_p + l.dn_dp2 / 4.0) / q;
            let conformal = q / l.abs_p;
            let dn_log_conformal = dn_log_q - l.dn_log_p;
            let mcv1 = (kappa - 0.5 * dn_log_conformal) / conformal;
            mcv1 + (-0.5 * (nf - 1.0) * l.dn_log_p + 0.5 * dn_log_q) / conformal
        }
    }
}

/// Curvature of the curve on the double cover at an interior point.
pub fn double_cover_curvature(p: &ComplexPoly, z: C, normal: C, kappa: f64) -> f64 {
    let l = local(p, z, normal);
    let q = l.abs_p + l.abs_dp2 / 4.0;
    let g = q / l.abs_p;
    let dn_log_g = (l.abs_p * l.dn_log_p + l.dn_dp2 / 4.0) / q - l.dn_log_p;
    (kappa - 0.5 * dn_log_g) / g.sqrt()
}

/// Speed and `t`-normal at chart sample `k`, from the flow written in the
/// square-root coordinate.
fn chart_velocity(ch: &EndChart, p: &ComplexPoly, n: usize, k: usize) -> (f64, C) {
    let nf = n as f64;
    let w = ch.w[k];
    let (d1, d2) = ch.derivatives(k);
    let speed_w = d1.norm();
    let tangent = d1 / speed_w;
    let normal_w = C::new(0.0, 1.0) * tangent;
    let kappa_w = (d1.conj() * d2).im / (speed_w * speed_w * speed_w);
    let dt = w * w;
    let t = ch.root + dt;
    let (pv, dpv) = p.eval_with_derivative(t);
    let h = pv / dt;
    let h_t = (dpv * dt - pv) / (dt * dt);
    let dn_log_w = (normal_w / w).re;
    let dn_log_h = (2.0 * w * h_t / h * normal_w).re;
    let bracket = kappa_w + (1.0 - nf) * dn_log_w + (1.0 - nf / 2.0) * dn_log_h;
    let vw = bracket / (4.0 * w.norm_sqr() + dpv.norm_sqr() / h.norm());
    (2.0 * w.norm() * vw, normal_w * w / w.norm())
}

fn check_roots(curve: &MarkedCurve, p: &ComplexPoly, num: &Numerics) -> Result<(), FlowError> {
    let m = curve.len();
    for (index, &z) in curve.points.iter().enumerate().take(m - 1).skip(1) {
        let (d, root) = p.nearest_root(z);
        if d <= num.eps_root {
            return Err(FlowError::NearRoot { index, root });
        }
    }
    Ok(())
}

/// Normal speeds and normals at every sample. The two samples next to a
/// pinned endpoint use the square-root chart; pinned endpoints get 0.
pub fn velocity_field(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    formula: Formula,
    num: &Numerics,
) -> Result<VelocityField, FlowError> {
    check_roots(curve, p, num)?;
    let dq = curve.differential_quantities(5)?;
    let m = curve.len();
    let mut speed: Vec<f64> = (0..m)
        .map(|k| {
            if k == 0 || k == m - 1 {
                0.0
            } else {
                normal_speed(formula, p, n, curve.points[k], dq.normal[k], dq.curvature[k])
            }
        })
        .collect();
    let mut normal = dq.normal;
    if curve.left_root.is_some() {
        if let Some(ch) = EndChart::new(&curve.points, curve.points[0]) {
            for k in 1..=2 {
                let (v, nn) = chart_velocity(&ch, p, n, k);
                speed[k] = v;
                normal[k] = nn;
            }
        }
    }
    if curve.right_root.is_some() {
        let rev: Vec<C> = curve.points.iter().rev().copied().collect();
        if let Some(ch) = EndChart::new(&rev, rev[0]) {
            for k in 1..=2 {
                let (v, nn) = chart_velocity(&ch, p, n, k);
                speed[m - 1 - k] = -v;
                normal[m - 1 - k] = -nn;
            }
        }
    }
    Ok(VelocityField { speed, normal })
}

/// Signed normal speed at every sample (`0` at the endpoints).
pub fn velocity(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    formula: Formula,
    num: &Numerics,
) -> Result<Vec<f64>, FlowError> {
    Ok(velocity_field(curve, p, n, formula, num)?.speed)
}

/// Largest `|kappa^1|` over samples outside the endpoint charts.
pub fn max_double_cover_curvature(curve: &MarkedCurve, p: &ComplexPoly) -> f64 {
    let Ok(dq) = curve.differential_quantities(5) else {
        return f64::NAN;
    };
    let m = curve.len();
    let lo = if curve.left_root.is_some() { 3 } else { 0 };
    let hi = if curve.right_root.is_some() { m.saturating_sub(3) } else { m };
    (lo..hi)
        .map(|k| double_cover_curvature(p, curve.points[k], dq.normal[k], dq.curvature[k]).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn formulas_agree_pointwise() {
        let num = Numerics::default();
        let p = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(0.3, 0.8), c(1.0, -0.2)], c(0.7, 0.4), &num).unwrap();
        for n in [2, 3, 4, 6] {
            for (z, phase, kappa) in [(c(0.2, 0.1), 0.3, 1.5), (c(-0.5, -0.7), 2.0, -0.2), (c(2.0, 1.0), -1.0, 0.0)] {
                let nrm = C::from_polar(1.0, phase);
                let a = normal_speed(Formula::Result1, &p, n, z, nrm, kappa);
                let b = normal_speed(Formula::Conformal, &p, n, z, nrm, kappa);
                let d = normal_speed(Formula::DoubleCover, &p, n, z, nrm, kappa);
                let scale = a.abs().max(1e-3);
                assert!((a - b).abs() / scale < 1e-12 && (a - d).abs() / scale < 1e-12, "{n}: {a} {b} {d}");
            }
        }
    }

    #[test]
    fn segment_is_stationary() {
        let num = Numerics::default();
        let p = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), &num).unwrap();
        let seg = MarkedCurve::segment(&p, 0, 1, 101).unwrap();
        for n in 2..=5 {
            let v = velocity(&seg, &p, n, Formula::Result1, &num).unwrap();
            assert!(v.iter().all(|x| x.abs() < 1e-10), "{n}: {v:?}");
        }
    }

    #[test]
    fn chart_matches_interior_formula_on_arc() {
        let num = Numerics::default();
        let p = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), &num).unwrap();
        let arc = MarkedCurve::arc(&p, 0, 1, 0.3, 2001).unwrap();
        let field = velocity_field(&arc, &p, 3, Formula::Result1, &num).unwrap();
        let dq = arc.differential_quantities(5).unwrap();
        for k in [1, 2, 1999, 1998] {
            let direct = normal_speed(Formula::Result1, &p, 3, arc.points[k], dq.normal[k], dq.curvature[k]);
            let along = field.speed[k] * (field.normal[k] * dq.normal[k].conj()).re;
            assert!((direct - along).abs() < 2e-2 * direct.abs().max(1e-3), "{k}: {direct} {along}");
        }
    }

    #[test]
    fn near_root_is_rejected() {
        let num = Numerics::default();
        let p = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), &num).unwrap();
        let seg = MarkedCurve::segment(&p, 0, 2, 101).unwrap();
        assert!(matches!(velocity(&seg, &p, 2, Formula::Result1, &num), Err(FlowError::NearRoot { index: 50, root: 1 })));
    }
}
