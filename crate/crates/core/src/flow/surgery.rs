use crate::curve::MarkedCurve;
use crate::error::FlowError;
use crate::fd;
use crate::geometry::{align_grading, phase_profile};
use crate::numerics::Numerics;
use crate::polynomial::{ComplexPoly, C};

use super::velocity::{velocity_field, Formula};

/// Least-squares cubic through `(s, z)` evaluated at `x`.
fn cubic_fit(s: &[f64], z: &[C], x: f64) -> C {
    let centre = s.iter().sum::<f64>() / s.len() as f64;
    let scale = s.iter().map(|v| (v - centre).abs()).fold(1e-300, f64::max);
    let u: Vec<f64> = s.iter().map(|v| (v - centre) / scale).collect();
    // Normal equations for the 4 monomial coefficients.
    let mut a = [[0.0f64; 4]; 4];
    let mut b = [C::new(0.0, 0.0); 4];
    for (ui, zi) in u.iter().zip(z) {
        let pw = [1.0, *ui, ui * ui, ui * ui * ui];
        for r in 0..4 {
            for c in 0..4 {
                a[r][c] += pw[r] * pw[c];
            }
            b[r] += zi * pw[r];
        }
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
                let bc = b[col];
                b[r] -= bc * f;
            }
        }
    }
    let xu = (x - centre) / scale;
    (0..4).map(|i| b[i] / a[i][i] * xu.powi(i as i32)).sum()
}

/// Replaces the samples of `points` (which start at a root) that lie
/// within `radius` of the root by a cubic Hermite arc leaving the root
/// toward the first retained sample and joining it with its own tangent;
/// then refits the first interior sample by a local cubic. Returns the
/// index of the first retained sample.
fn blend_into_root(points: &mut [C], radius: f64) -> usize {
    let root = points[0];
    let m = points.len();
    let j = (2..m.saturating_sub(3)).find(|&i| (points[i] - root).norm() >= radius).unwrap_or(2);
    let zj = points[j];
    let chord = zj - root;
    let len = chord.norm();
    let t_end = (points[j + 1] - points[j - 1]) / (points[j + 1] - points[j - 1]).norm();
    let d0 = chord / len * len;
    let d1 = t_end * len;
    for (i, z) in points.iter_mut().enumerate().take(j).skip(1) {
        let u = i as f64 / j as f64;
        let h00 = 2.0 * u * u * u - 3.0 * u * u + 1.0;
        let h10 = u * u * u - 2.0 * u * u + u;
        let h01 = -2.0 * u * u * u + 3.0 * u * u;
        let h11 = u * u * u - u * u;
        *z = root * h00 + d0 * h10 + zj * h01 + d1 * h11;
    }
    if m >= 6 {
        let s = fd::chord_params(&points[..6]);
        let idx = [0usize, 2, 3, 4, 5];
        let ss: Vec<f64> = idx.iter().map(|&i| s[i]).collect();
        let zz: Vec<C> = idx.iter().map(|&i| points[i]).collect();
        points[1] = cubic_fit(&ss, &zz, s[1]);
    }
    j
}

/// Splits the curve at a root it is running into, or returns `None`.
///
/// Fires when an interior sample is within `split_radius * h` of a root
/// (outside the end guards) and the flow velocity there points toward it.
/// The closest sample is snapped to the root, the samples near it are
/// replaced by smooth arcs into the root,
/// and each piece continues the parent's grading on its own side.
pub fn detect_and_split(
    curve: &MarkedCurve,
    p: &ComplexPoly,
    n: usize,
    num: &Numerics,
) -> Result<Option<(MarkedCurve, MarkedCurve)>, FlowError> {
    let h = curve.mean_spacing();
    let prox = curve.min_root_distance(p, num.end_guard * h);
    if !(prox.distance < num.split_radius * h) {
        return Ok(None);
    }
    let root = p.root(prox.root).expect("root index from proximity");
    let k = prox.index;
    let towards = match velocity_field(curve, p, n, Formula::Result1, num) {
        Ok(field) => (field.normal[k] * field.speed[k] * (root - curve.points[k]).conj()).re >= 0.0,
        Err(FlowError::NearRoot { .. }) => true,
        Err(e) => return Err(e),
    };
    if !towards {
        return Ok(None);
    }
    let m = curve.len();
    let left_len = k + 1;
    let right_len = m - k;
    let need = num.n_min.min(curve.len() / 2).max(6);
    if left_len < need {
        return Err(FlowError::SplitFailed(left_len));
    }
    if right_len < need {
        return Err(FlowError::SplitFailed(right_len));
    }
    let parent = phase_profile(curve, p, n)?;

    let radius = (4.0 * prox.distance).max(num.surgery_blend * h);
    let mut a_pts = curve.points[..=k].to_vec();
    a_pts[k] = root;
    a_pts.reverse();
    blend_into_root(&mut a_pts, radius);
    a_pts.reverse();
    let mut b_pts = curve.points[k..].to_vec();
    b_pts[0] = root;
    let jb = blend_into_root(&mut b_pts, radius);

    let base = MarkedCurve { points: vec![], left_root: None, right_root: None, ..curve.clone() };
    let mut a = MarkedCurve { points: a_pts, left_root: curve.left_root, right_root: Some(prox.root), ..base.clone() };
    let mut b = MarkedCurve { points: b_pts, left_root: Some(prox.root), right_root: curve.right_root, ..base };
    a = a.resample_count(left_len);
    b = b.resample_count(right_len);
    align_grading(&mut a, p, n, 1, parent.tangent_angle[1], parent.arg_p[1])?;
    let at_b = (jb + 3).min(right_len - 2);
    align_grading(&mut b, p, n, at_b, parent.tangent_angle[k + at_b], parent.arg_p[k + at_b])?;
    Ok(Some((a, b)))
}
