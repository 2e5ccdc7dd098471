//! Consistency checks of the flow against the phase equation and the
//! gradient structure of the weighted volume.

use crate::curve::MarkedCurve;
use crate::error::FlowError;
use crate::fd;
use crate::geometry::{continue_grading, density, omega_weight, phase_profile, weighted_volume, PhaseProfile};
use crate::numerics::Numerics;
use crate::polynomial::{ComplexPoly, C};

use super::engine::normal_step;
use super::velocity::{normal_speed, velocity_field, Formula};

/// `(1/m) d/ds (m d theta/ds)` on a non-uniform grid, in conservative form.
/// The two end values copy their neighbours.
pub fn weighted_laplacian(s: &[f64], m: &[f64], theta: &[f64]) -> Vec<f64> {
    let len = s.len();
    let mut out = vec![0.0; len];
    if len < 3 {
        return out;
    }
    let flux = |k: usize| {
        let ds = s[k + 1] - s[k];
        0.5 * (m[k] + m[k + 1]) * (theta[k + 1] - theta[k]) / ds
    };
    for k in 1..len - 1 {
        let cell = 0.5 * (s[k + 1] - s[k - 1]);
        out[k] = (flux(k) - flux(k - 1)) / (m[k] * cell);
    }
    out[0] = out[1];
    out[len - 1] = out[len - 2];
    out
}

/// `-Delta^Omega theta` along the curve: the weight is `w R^(n-1)` with
/// `R = |p|^(1/2)` and `s` the arclength upstairs,
/// `ds = sqrt(1 + |p'|^2/(4|p|)) |dt|`.
pub fn weighted_laplacian_diagnostic(curve: &MarkedCurve, p: &ComplexPoly, n: usize, theta: &PhaseProfile) -> Vec<f64> {
    let pts = &curve.points;
    let weight: Vec<f64> = pts
        .iter()
        .map(|&z| omega_weight(p, n, z).unwrap_or(0.0) * p.eval(z).norm().powf((n as f64 - 1.0) / 2.0))
        .collect();
    let mut s = vec![0.0];
    for w in pts.windows(2) {
        let mid = (w[0] + w[1]) / 2.0;
        let (v, dv) = p.eval_with_derivative(mid);
        let g = 1.0 + dv.norm_sqr() / (4.0 * v.norm());
        s.push(s.last().unwrap() + g.sqrt() * (w[1] - w[0]).norm());
    }
    weighted_laplacian(&s, &weight, &theta.values)
}

/// Finite-difference `d theta / d tau` over a normal step of size `dt`
/// (no redistribution, so samples are followed along normals), paired with
/// `-Delta^Omega theta` at the start.
pub fn theta_rate_check(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    dt: f64,
    num: &Numerics,
) -> Result<(Vec<f64>, Vec<f64>), FlowError> {
    let before = phase_profile(curve, p, n)?;
    let mut moved = normal_step(curve, p, n, dt, num)?;
    let after = continue_grading(&mut moved, &before, p, n)?;
    let rate = after.values.iter().zip(&before.values).map(|(a, b)| (a - b) / dt).collect();
    Ok((rate, weighted_laplacian_diagnostic(curve, p, n, &before)))
}

fn trapezoid(points: &[C], f: &[f64]) -> f64 {
    points
        .windows(2)
        .zip(f.windows(2))
        .map(|(z, v)| 0.5 * (z[1] - z[0]).norm() * (v[0] + v[1]))
        .sum()
}

/// `V / D = kappa + (1 - n/2) d_n log|p|` at every sample, with the
/// normals of the curve.
fn reduced_curvature(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<(Vec<f64>, Vec<C>), FlowError> {
    let dq = curve.differential_quantities(5)?;
    let vals = curve
        .points
        .iter()
        .zip(dq.normal.iter().zip(&dq.curvature))
        .map(|(&z, (&nn, &k))| {
            let (v, dv) = p.eval_with_derivative(z);
            k + (1.0 - n as f64 / 2.0) * (dv * nn / v).re
        })
        .collect();
    Ok((vals, dq.normal))
}

/// First variation of the weighted volume along `psi * normal`: the central
/// difference quotient with step `eps`, and the pairing
/// `-int |p|^((n-2)/2) (V/D) psi |dt|`.
pub fn first_variation(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    psi: &[f64],
    eps: f64,
) -> Result<(f64, f64), FlowError> {
    let (vd, normal) = reduced_curvature(curve, p, n)?;
    let shifted = |sign: f64| {
        let mut c = curve.clone();
        for (k, z) in c.points.iter_mut().enumerate() {
            *z += normal[k] * (sign * eps * psi[k]);
        }
        weighted_volume(&c, p, n)
    };
    let quotient = (shifted(1.0) - shifted(-1.0)) / (2.0 * eps);
    let integrand: Vec<f64> = curve
        .points
        .iter()
        .enumerate()
        .map(|(k, &z)| if psi[k] == 0.0 { 0.0 } else { -density(p, n, z) * vd[k] * psi[k] })
        .collect();
    Ok((quotient, trapezoid(&curve.points, &integrand)))
}

/// `int |p|^((n-2)/2) V^2 / D |dt|`, the rate at which the flow decreases the
/// weighted volume.
pub fn volume_dissipation(curve: &MarkedCurve, p: &ComplexPoly, n: usize, num: &Numerics) -> Result<f64, FlowError> {
    let field = velocity_field(curve, p, n, Formula::Result1, num)?;
    let integrand: Vec<f64> = curve
        .points
        .iter()
        .zip(&field.speed)
        .map(|(&z, &v)| {
            let (pv, dv) = p.eval_with_derivative(z);
            let g = 1.0 + dv.norm_sqr() / (4.0 * pv.norm());
            if g.is_finite() {
                density(p, n, z) * v * v * g
            } else {
                0.0
            }
        })
        .collect();
    Ok(trapezoid(&curve.points, &integrand))
}

/// Largest relative disagreement between the three velocity formulas over
/// the interior samples, with shared curvature. Relative errors use
/// `max(|V_a|, |V_b|, floor)` with `floor = 1e-6 max|V|`, so that sign changes
/// of `V` do not divide by zero.
pub fn formula_disagreement(curve: &MarkedCurve, p: &ComplexPoly, n: usize) -> Result<f64, FlowError> {
    let dq = curve.differential_quantities(5)?;
    let m = curve.len();
    let speeds: Vec<[f64; 3]> = (1..m - 1)
        .map(|k| {
            let at = |f| normal_speed(f, p, n, curve.points[k], dq.normal[k], dq.curvature[k]);
            [at(Formula::Result1), at(Formula::Conformal), at(Formula::DoubleCover)]
        })
        .collect();
    let scale = speeds.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = 1e-6 * scale;
    let mut worst: f64 = 0.0;
    for v in &speeds {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = (v[i] - v[j]).abs() / v[i].abs().max(v[j].abs()).max(floor).max(f64::MIN_POSITIVE);
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Chord-length parameter of the samples; exposed for building test fields.
pub fn chord_lengths(curve: &MarkedCurve) -> Vec<f64> {
    fd::chord_params(&curve.points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_constant_vanishes() {
        let s: Vec<f64> = (0..50).map(|k| (k as f64 * 0.1).powf(1.2)).collect();
        let m: Vec<f64> = s.iter().map(|x| 1.0 + x).collect();
        let lap = weighted_laplacian(&s, &m, &vec![0.7; 50]);
        assert!(lap.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn flat_laplacian_of_square_is_two() {
        let s: Vec<f64> = (0..60).map(|k| k as f64 * 0.05).collect();
        let th: Vec<f64> = s.iter().map(|x| x * x).collect();
        let lap = weighted_laplacian(&s, &vec![3.0; 60], &th);
        assert!(lap.iter().all(|v| (v - 2.0).abs() < 1e-10), "{lap:?}");
    }
}
