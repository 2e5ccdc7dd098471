//! Constant-phase (special Lagrangian) curves.
//!
//! A curve has constant phase `phi` when
//! `gamma'(s) = exp(i (phi - (n/2 - 1) arg p(gamma(s))))` at unit speed. Near a
//! simple root `z` the linearisation `p ~ p'(z)(t - z)` fixes the admissible
//! starting directions `beta_k = (2 phi - (n-2) arg p'(z)) / n + 4 pi k / n`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::curve::MarkedCurve;
use crate::error::SlagError;
use crate::geometry::{form_exponent, grade_near, period_along};
use crate::numerics::Numerics;
use crate::polynomial::{nearest_lift, ComplexPoly, C};

/// Output of a single shoot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shot {
    pub curve: MarkedCurve,
    pub phi: f64,
    pub branch: i64,
    /// Root reached within the capture radius, if any.
    pub captured: Option<usize>,
}

/// Starting direction of the constant-phase curve of phase `phi` and branch
/// `k` at root `z`.
pub fn start_direction(p: &ComplexPoly, n: usize, z: C, phi: f64, k: i64) -> f64 {
    let (_, dp) = p.eval_with_derivative(z);
    let nf = n as f64;
    (2.0 * phi - (nf - 2.0) * dp.arg()) / nf + 4.0 * PI * k as f64 / nf
}

/// Boundary directions of phases `lo` and `hi` at a root and the cone width
/// `(hi - lo) / n`.
pub fn cone_directions(p: &ComplexPoly, n: usize, root: usize, lo: f64, hi: f64) -> Result<([f64; 2], f64), SlagError> {
    let z = p.root(root).ok_or(SlagError::BadRoot(root))?;
    Ok((
        [start_direction(p, n, z, lo, 0), start_direction(p, n, z, hi, 0)],
        (hi - lo) / n as f64,
    ))
}

struct Box2 {
    lo: C,
    hi: C,
    diameter: f64,
}

fn domain(p: &ComplexPoly) -> Box2 {
    let roots = p.roots();
    let (mut lo, mut hi) = (roots[0], roots[0]);
    for z in roots {
        lo = C::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = C::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let diameter = (hi - lo).norm().max(1.0);
    let pad = C::new(diameter, diameter);
    Box2 { lo: lo - pad, hi: hi + pad, diameter }
}

impl Box2 {
    fn contains(&self, z: C) -> bool {
        z.re >= self.lo.re && z.re <= self.hi.re && z.im >= self.lo.im && z.im <= self.hi.im
    }
}

/// Integrates the constant-phase ODE; `arg` tracks the lift of `arg p`.
struct Integrator<'a> {
    p: &'a ComplexPoly,
    half: f64,
    phi: f64,
    /// Largest substep as a fraction of the distance to the nearest root.
    resolve: f64,
}

impl Integrator<'_> {
    fn dir(&self, z: C, arg_ref: f64) -> (C, f64) {
        let a = nearest_lift(self.p.eval(z).arg(), arg_ref);
        (C::from_polar(1.0, self.phi - self.half * a), a)
    }

    /// One RK4 step of length `h`; `None` when the lift of `arg p` moves by
    /// more than pi/4 across the step.
    fn step(&self, z: C, arg: f64, h: f64) -> Option<(C, f64)> {
        let (k1, a1) = self.dir(z, arg);
        let (k2, a2) = self.dir(z + k1 * (h / 2.0), a1);
        let (k3, a3) = self.dir(z + k2 * (h / 2.0), a2);
        let (k4, a4) = self.dir(z + k3 * h, a3);
        let strain = [a1, a2, a3, a4].iter().map(|a| (a - arg).abs()).fold(0.0, f64::max);
        if self.half != 0.0 && strain > FRAC_PI_4 {
            return None;
        }
        let next = z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let (_, a) = self.dir(next, a4);
        Some((next, a))
    }

    /// Advances by arclength `h` in substeps no longer than `resolve` times
    /// the distance to the nearest root (the direction field turns on that
    /// scale), doubling up to 2^12 more when the lift strains.
    fn advance(&self, z: C, arg: f64, h: f64) -> Option<(C, f64)> {
        let near = self.p.nearest_root(z).0;
        let mut sub = if self.half == 0.0 { 1 } else { (h / (self.resolve * near)).ceil().max(1.0) as usize };
        let cap = sub << 12;
        while sub <= cap {
            let hh = h / sub as f64;
            let mut cur = Some((z, arg));
            for _ in 0..sub {
                cur = cur.and_then(|(zz, aa)| self.step(zz, aa, hh));
            }
            if cur.is_some() {
                return cur;
            }
            sub *= 2;
        }
        None
    }
}

/// Starting point at distance about `eps` from the root `z0` along
/// direction `beta`, moved sideways onto the level set
/// `Im(e^(-i phi) int_z0^t p^((n-2)/2)) = 0` of the constant-phase curve
/// through the root itself, with its lift of `arg p`.
fn seeded_start(p: &ComplexPoly, n: usize, z0: C, phi: f64, beta: f64, eps: f64) -> Result<(C, f64), SlagError> {
    let (_, dp) = p.eval_with_derivative(z0);
    let ray = C::from_polar(1.0, beta);
    let lift = |z: C| nearest_lift(p.eval(z).arg(), dp.arg() + beta);
    let mut z = z0 + ray * eps;
    if n == 2 {
        return Ok((z, lift(z)));
    }
    let rot = C::from_polar(1.0, -phi);
    let e = form_exponent(n);
    for _ in 0..4 {
        let level = (rot * period_along(&[z0, z], p, n, lift(z))?).im;
        let v = p.eval(z);
        let slope = (rot * C::from_polar(v.norm().powf(e), e * lift(z)) * C::i() * ray).im;
        if slope == 0.0 {
            break;
        }
        z -= C::i() * ray * (level / slope);
    }
    Ok((z, lift(z)))
}

/// Distances `k^2 c`, `k = 1..=32`, with `c = h / 63`: samples this close to
/// a root are uniform in its square-root chart, and the last gap is `h`.
fn ramp(h: f64) -> Vec<f64> {
    let c = h / 63.0;
    (1..=32).map(|k| (k * k) as f64 * c).collect()
}

/// Arclength nodes on `(0, total]` with spacing about `h`, refined by
/// [`ramp`] toward both ends; nodes within `skip[0]` of the start or
/// `skip[1]` of the end (other than `total` itself) are dropped.
fn graded_nodes(total: f64, h: f64, skip: [f64; 2]) -> Vec<f64> {
    let r = ramp(h);
    let span = r[r.len() - 1];
    let mut out = Vec::new();
    if total - 2.0 * span < 2.0 * h {
        let steps = (total / h).ceil().max(2.0) as usize;
        out.extend((1..=steps).map(|k| total * k as f64 / steps as f64));
    } else {
        out.extend(&r);
        let steps = ((total - 2.0 * span) / h).ceil() as usize;
        out.extend((1..=steps).map(|k| span + (total - 2.0 * span) * k as f64 / steps as f64));
        out.extend(r.iter().rev().skip(1).map(|d| total - d));
        out.push(total);
    }
    out.retain(|&s| s == total || (s > skip[0] && total - s > skip[1]));
    out
}

struct Trace {
    points: Vec<C>,
    captured: Option<usize>,
    /// Lift of `arg p` at the last sample.
    arg: f64,
    /// Arclength from the root to the last sample.
    length: f64,
}

#[allow(clippy::too_many_arguments)]
fn trace(
    p: &ComplexPoly,
    n: usize,
    root: usize,
    phi: f64,
    k: i64,
    max_length: f64,
    resolve: f64,
    num: &Numerics,
) -> Result<Trace, SlagError> {
    let z0 = p.root(root).ok_or(SlagError::BadRoot(root))?;
    let sep = p.local_separation(root);
    let dom = domain(p);
    let h0 = num.shoot_step * dom.diameter;
    let beta = start_direction(p, n, z0, phi, k);
    let offset = (num.shoot_offset * sep).min(0.5 * ramp(h0)[0]);
    let integ = Integrator { p, half: n as f64 / 2.0 - 1.0, phi, resolve };
    let (mut z, mut arg) = seeded_start(p, n, z0, phi, beta, offset)?;
    let mut points = vec![z0];
    let mut length = offset;
    let mut captured = None;
    // Quadratic refinement right after the root, then steps of `h0`.
    let mut ramp = ramp(h0).into_iter();
    'outer: while length < max_length {
        let h = match ramp.next() {
            Some(node) => node - length,
            None => h0,
        }
        .min(max_length - length);
        let Some((next, a)) = integ.advance(z, arg, h) else {
            // The lift only fails to resolve while grazing a root.
            let (d, j) = p.nearest_root(z);
            if j != root && d < 2.0 * h0 {
                captured = Some(j);
                break;
            }
            return Err(SlagError::ShootStalled(length));
        };
        if !dom.contains(next) {
            break;
        }
        z = next;
        arg = a;
        length += h;
        points.push(z);
        for (j, &r) in p.roots().iter().enumerate() {
            if j != root && (z - r).norm() < num.capture_radius * p.local_separation(j) {
                captured = Some(j);
                break 'outer;
            }
        }
    }
    Ok(Trace { points, captured, arg, length })
}

/// Shoots the constant-phase curve of phase `phi`, branch `k`, from root
/// `root`. Stops after `max_length`, on leaving the domain box (the root
/// bounding box padded by its diameter), or within the capture radius of
/// another root. The curve starts at the root itself; samples are the RK4
/// steps taken after the initial offset.
pub fn slag_shoot(
    p: &ComplexPoly,
    n: usize,
    root: usize,
    phi: f64,
    k: i64,
    max_length: f64,
    num: &Numerics,
) -> Result<Shot, SlagError> {
    let tr = trace(p, n, root, phi, k, max_length, 0.01, num)?;
    let mut curve =
        MarkedCurve { points: tr.points, left_root: Some(root), right_root: None, time: 0.0, grading_offset: 0, sheet: 0 };
    // Trajectories that graze another root may not be liftable; their
    // grading is left at zero.
    if curve.len() >= 5 && grade_near(&mut curve, p, n, phi).is_err() {
        curve.sheet = 0;
        curve.grading_offset = 0;
    }
    Ok(Shot { curve, phi, branch: k, captured: tr.captured })
}

/// Signed distance of `target` from the trajectory at its closest approach
/// (positive when the target lies to the left) and the arclength there.
///
/// When the trace ends at `target`'s capture radius the trajectory is
/// continued by its osculating parabola, whose curvature
/// `-(n/2 - 1) Im(p' T / p)` is exact for the ODE.
fn miss(tr: &Trace, p: &ComplexPoly, n: usize, phi: f64, target: C, target_idx: usize) -> (f64, f64) {
    if tr.captured == Some(target_idx) {
        let z = *tr.points.last().unwrap();
        let half = n as f64 / 2.0 - 1.0;
        let (v, dv) = p.eval_with_derivative(z);
        let tangent = C::from_polar(1.0, phi - half * tr.arg);
        let kappa = -half * (dv * tangent / v).im;
        let d = (target - z) * tangent.conj();
        return (d.im - 0.5 * kappa * d.re * d.re, tr.length + d.re);
    }
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut acc = 0.0;
    for w in tr.points.windows(2) {
        let d = w[1] - w[0];
        let len = d.norm();
        let u = (((target - w[0]) * d.conj()).re / (len * len)).clamp(0.0, 1.0);
        let q = w[0] + d * u;
        let dist = (target - q).norm();
        if dist < best.0 {
            let side = (d.conj() * (target - q)).im.signum();
            best = (dist, side * dist, acc + u * len);
        }
        acc += len;
    }
    (best.1, best.2)
}

/// Connector found by [`slag_connect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Connector {
    pub curve: MarkedCurve,
    pub phi_star: f64,
    pub branch: i64,
}

/// Finds the constant-phase curve from `root_a` to `root_b` with phase in
/// `window`, by bisection on the signed miss of the shoot at `root_b`.
pub fn slag_connect(
    p: &ComplexPoly,
    n: usize,
    root_a: usize,
    root_b: usize,
    window: [f64; 2],
    k: i64,
    num: &Numerics,
) -> Result<Connector, SlagError> {
    let za = p.root(root_a).ok_or(SlagError::BadRoot(root_a))?;
    let zb = p.root(root_b).ok_or(SlagError::BadRoot(root_b))?;
    let scale = (zb - za).norm();
    let max_length = 4.0 * domain(p).diameter;
    let signed = |phi: f64| -> Result<(f64, f64), SlagError> {
        let tr = trace(p, n, root_a, phi, k, max_length, 0.1, num)?;
        if tr.points.len() < 2 {
            return Ok((f64::NAN, 0.0));
        }
        Ok(miss(&tr, p, n, phi, zb, root_b))
    };
    let (mut lo, mut hi) = (window[0], window[1]);
    let (mut m_lo, _) = signed(lo)?;
    let (m_hi, _) = signed(hi)?;
    if !(m_lo * m_hi <= 0.0) {
        return Err(SlagError::NotFound);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (m, _) = signed(mid)?;
        if m == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (m < 0.0) == (m_lo < 0.0) {
            lo = mid;
            m_lo = m;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    let (m, reach) = signed(phi)?;
    if !(m.abs() < 1e-6 * scale) {
        return Err(SlagError::NotFound);
    }
    let (curve, phi_star) = pinned_connector(p, n, root_a, root_b, phi, k, reach, num)?;
    Ok(Connector { curve, phi_star, branch: k })
}

/// Integrates from the seeded start near `z0` through the arclength
/// `nodes`, measured from `z0`.
fn integrate_nodes(p: &ComplexPoly, n: usize, z0: C, phi: f64, beta: f64, offset: f64, nodes: &[f64]) -> Result<Vec<C>, SlagError> {
    let integ = Integrator { p, half: n as f64 / 2.0 - 1.0, phi, resolve: 0.01 };
    let (mut z, mut arg) = seeded_start(p, n, z0, phi, beta, offset)?;
    let mut at = offset;
    let mut out = Vec::with_capacity(nodes.len());
    for &node in nodes {
        let (zn, an) = integ.advance(z, arg, node - at).ok_or(SlagError::ShootStalled(at))?;
        z = zn;
        arg = an;
        at = node;
        out.push(z);
    }
    Ok(out)
}

/// Builds the connector of arclength about `reach` and returns it with its
/// refined phase.
///
/// The phase is replaced by the argument of the period along the shot,
/// which is exact for a curve joining the two roots. The curve is then
/// integrated from both roots to the middle node, and the small mismatch
/// there is spread linearly over each half, so neither end inherits the
/// error of the other.
#[allow(clippy::too_many_arguments)]
fn pinned_connector(
    p: &ComplexPoly,
    n: usize,
    root_a: usize,
    root_b: usize,
    phi: f64,
    k: i64,
    reach: f64,
    num: &Numerics,
) -> Result<(MarkedCurve, f64), SlagError> {
    let za = p.root(root_a).ok_or(SlagError::BadRoot(root_a))?;
    let zb = p.root(root_b).ok_or(SlagError::BadRoot(root_b))?;
    let h = (num.shoot_step * domain(p).diameter).min(reach / 8.0);
    let off_a = (num.shoot_offset * p.local_separation(root_a)).min(0.5 * ramp(h)[0]);
    let off_b = (num.shoot_offset * p.local_separation(root_b)).min(0.5 * ramp(h)[0]);
    let nodes = graded_nodes(reach, h, [off_a, off_b]);
    let m = nodes.len();

    let beta = start_direction(p, n, za, phi, k);
    let shot = integrate_nodes(p, n, za, phi, beta, off_a, &nodes[..m - 1])?;
    let mut path = vec![za];
    path.extend(&shot);
    path.push(zb);
    let (_, dp) = p.eval_with_derivative(za);
    let period = period_along(&path, p, n, nearest_lift(p.eval(path[1]).arg(), dp.arg() + beta))?;
    let phi_star = nearest_lift(period.arg(), phi);
    if (phi_star - phi).abs() > 1e-6 {
        return Err(SlagError::NotFound);
    }
    let beta = start_direction(p, n, za, phi_star, k);
    let arrival = (zb - shot[shot.len() - 1]).arg();
    let back_dir = |j: i64| start_direction(p, n, zb, phi_star + PI, j);
    let miss = |j: i64| (nearest_lift(back_dir(j), arrival + PI) - arrival - PI).abs();
    let j = (0..2 * n as i64).min_by(|&x, &y| miss(x).total_cmp(&miss(y))).unwrap_or(0);

    // Halves from each root meeting at the middle node; the arclength is
    // corrected until they meet head on, leaving a sideways gap only.
    let mut reach = reach;
    let mut halves;
    let mut iterations = 0;
    loop {
        let nodes = graded_nodes(reach, h, [off_a, off_b]);
        let m = nodes.len();
        let mid = m / 2;
        let forward = integrate_nodes(p, n, za, phi_star, beta, off_a, &nodes[..=mid])?;
        let back_nodes: Vec<f64> = nodes[mid..m - 1].iter().rev().map(|s| reach - s).collect();
        let backward = integrate_nodes(p, n, zb, phi_star + PI, back_dir(j), off_b, &back_nodes)?;
        let end = backward.len() - 1;
        let heading = backward[end] - backward[end - 1];
        let ahead = ((forward[mid] - backward[end]) * heading.conj()).re / heading.norm();
        halves = (nodes, forward, backward);
        iterations += 1;
        if ahead.abs() <= 1e-13 * reach || iterations == 4 {
            break;
        }
        reach += ahead;
    }
    let (nodes, forward, backward) = halves;
    let mid = nodes.len() / 2;
    let gap = forward[mid] - backward[backward.len() - 1];
    let (s_mid, r_mid) = (nodes[mid], reach - nodes[mid]);
    let mut pts = vec![za];
    pts.extend(forward.iter().zip(&nodes).map(|(&z, &s)| z - gap * (0.5 * s / s_mid)));
    pts.extend(backward.iter().rev().skip(1).zip(&nodes[mid + 1..]).map(|(&z, &s)| z + gap * (0.5 * (reach - s) / r_mid)));
    pts.push(zb);
    let mut curve =
        MarkedCurve { points: pts, left_root: Some(root_a), right_root: Some(root_b), time: 0.0, grading_offset: 0, sheet: 0 };
    grade_near(&mut curve, p, n, phi_star)?;
    Ok((curve, phi_star))
}

/// Number of distinct starting directions at a root: `beta_k` repeats with
/// period `n / gcd(n, 2)` in `k`.
pub fn branch_count(n: usize) -> i64 {
    if n % 2 == 0 {
        n as i64 / 2
    } else {
        n as i64
    }
}

/// Every connector found between every pair of roots, over all distinct
/// branches and the phase windows `[-pi + 2 pi j / grid, -pi + 2 pi (j+1) / grid]`.
pub fn slag_atlas(p: &ComplexPoly, n: usize, grid: usize, num: &Numerics) -> Vec<Connector> {
    let mut out = Vec::new();
    let grid = grid.max(1);
    for a in 0..p.degree() {
        for b in a + 1..p.degree() {
            for k in 0..branch_count(n) {
                for j in 0..grid {
                    let lo = -PI + 2.0 * PI * j as f64 / grid as f64;
                    let hi = -PI + 2.0 * PI * (j + 1) as f64 / grid as f64;
                    if let Ok(c) = slag_connect(p, n, a, b, [lo, hi], k, num) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// A local-model curve with its flat phase functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalModel {
    pub points: Vec<C>,
    /// `arg(gamma') + (n - 1) arg(gamma)` at each sample.
    pub phase: Vec<f64>,
}

/// Samples of the constant-phase curve `r^n sin(n theta) = c`,
/// `theta in (0, pi/n)`, traversed from the `pi/n` end toward the `0` end,
/// with its local phase functional evaluated from the analytic tangent.
pub fn local_model_curve(n: usize, c: f64, samples: usize) -> LocalModel {
    let nf = n as f64;
    let mut points = Vec::with_capacity(samples);
    let mut phase = Vec::with_capacity(samples);
    let mut prev_t: Option<f64> = None;
    for j in 0..samples {
        let th = PI / nf * (1.0 - (j as f64 + 0.5) / samples as f64);
        let r = (c / (nf * th).sin()).powf(1.0 / nf);
        let z = C::from_polar(r, th);
        // d/d(theta) of r e^{i theta} is (r / sin n theta) e^{i (pi - n theta)} e^{i theta};
        // the traversal runs with decreasing theta.
        let tangent = -C::from_polar(r / (nf * th).sin(), PI - nf * th + th);
        let t_arg = match prev_t {
            Some(prev) => nearest_lift(tangent.arg(), prev),
            None => tangent.arg(),
        };
        prev_t = Some(t_arg);
        points.push(z);
        phase.push(t_arg + (nf - 1.0) * th);
    }
    LocalModel { points, phase }
}
