//! The polynomial `p(t)` defining the family `sum x_i^2 = p(t)`.
//!
//! Holds coefficients, cached simple roots, Horner evaluation of `p`, `p'`
//! and `p''`, and continuous branches of `p^alpha` along sampled paths.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::PolyError;
use crate::numerics::Numerics;

pub type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoly {
    /// Ascending degree; the last entry is nonzero.
    coeffs: Vec<C>,
    roots: Vec<C>,
}

impl ComplexPoly {
    /// Builds `p` from coefficients and locates its roots. Roots are sorted by
    /// real part, then imaginary part, so indices are deterministic.
    pub fn from_coeffs(coeffs: Vec<C>, num: &Numerics) -> Result<Self, PolyError> {
        let coeffs = trim(coeffs);
        let mut roots = find_roots(&coeffs, num)?;
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(ComplexPoly { coeffs, roots })
    }

    /// Builds `leading * prod (t - r)`. Root order is kept as given.
    pub fn from_roots(roots: &[C], leading: C, num: &Numerics) -> Result<Self, PolyError> {
        if roots.is_empty() || leading == C::new(0.0, 0.0) {
            return Err(PolyError::ZeroDegree);
        }
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![C::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        check_separation(roots, num.sep_tol)?;
        Ok(ComplexPoly { coeffs, roots: roots.to_vec() })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn roots(&self) -> &[C] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn root(&self, i: usize) -> Option<C> {
        self.roots.get(i).copied()
    }

    pub fn eval(&self, t: C) -> C {
        self.coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    /// `(p(t), p'(t))` by Horner's scheme.
    pub fn eval_with_derivative(&self, t: C) -> (C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    /// `(p, p', p'')`.
    pub fn eval2(&self, t: C) -> (C, C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        let mut ddp = C::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * t + dp * 2.0;
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp, ddp)
    }

    /// Distance from `t` to the nearest root, with that root's index.
    pub fn nearest_root(&self, t: C) -> (f64, usize) {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| ((t - r).norm(), i))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("degree >= 1")
    }

    /// Smallest distance between two distinct roots (infinite for degree 1).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                best = best.min((self.roots[i] - self.roots[j]).norm());
            }
        }
        best
    }

    /// Separation of root `i` from the others; falls back to 1 for degree 1.
    pub fn local_separation(&self, i: usize) -> f64 {
        let r = self.roots[i];
        let d = self
            .roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, s)| (s - r).norm())
            .fold(f64::INFINITY, f64::min);
        if d.is_finite() {
            d
        } else {
            1.0
        }
    }

    /// Continuous branch of `p(path[k])^alpha`, starting from the principal
    /// branch at `path[0]`.
    pub fn branch_power(&self, path: &[C], alpha: f64, eps_root: f64) -> Result<Vec<C>, PolyError> {
        self.branch_power_from(path, alpha, eps_root, None)
    }

    /// Like [`branch_power`](Self::branch_power) with an explicit lift of
    /// `arg p(path[0])`.
    pub fn branch_power_from(
        &self,
        path: &[C],
        alpha: f64,
        eps_root: f64,
        start_arg: Option<f64>,
    ) -> Result<Vec<C>, PolyError> {
        let mut values = Vec::with_capacity(path.len());
        for (index, &t) in path.iter().enumerate() {
            if self.nearest_root(t).0 <= eps_root {
                return Err(PolyError::OnRoot { index });
            }
            values.push(self.eval(t));
        }
        let args = lift_args(&values, start_arg)?;
        Ok(values
            .iter()
            .zip(&args)
            .map(|(v, &a)| C::from_polar(v.norm().powf(alpha), alpha * a))
            .collect())
    }
}

/// Continuous lift of `arg values[k]`. Each step takes the increment of
/// smallest magnitude; an increment of pi/2 or more is reported as unresolved.
pub fn lift_args(values: &[C], start: Option<f64>) -> Result<Vec<f64>, PolyError> {
    let mut out = Vec::with_capacity(values.len());
    let Some(&first) = values.first() else {
        return Ok(out);
    };
    let mut current = match start {
        Some(a) => nearest_lift(first.arg(), a),
        None => first.arg(),
    };
    out.push(current);
    for (index, w) in values.windows(2).enumerate() {
        let jump = (w[1] / w[0]).arg();
        if jump.abs() >= FRAC_PI_2 {
            return Err(PolyError::BranchStep { index, jump });
        }
        current += jump;
        out.push(current);
    }
    Ok(out)
}

/// The representative of `angle + 2 pi k` closest to `reference`.
pub fn nearest_lift(angle: f64, reference: f64) -> f64 {
    angle + TAU * ((reference - angle) / TAU).round()
}

/// Principal argument wrapped into `(-pi, pi]`.
pub fn wrap_pi(a: f64) -> f64 {
    let w = a - TAU * ((a + PI) / TAU).floor();
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

fn trim(mut coeffs: Vec<C>) -> Vec<C> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    coeffs
}

fn check_separation(roots: &[C], sep_tol: f64) -> Result<(), PolyError> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm();
            if d <= sep_tol {
                return Err(PolyError::DegenerateRoots(i, j, d));
            }
        }
    }
    Ok(())
}

/// All complex roots by Aberth–Ehrlich iteration followed by Newton polish.
pub fn find_roots(coeffs: &[C], num: &Numerics) -> Result<Vec<C>, PolyError> {
    let coeffs = trim(coeffs.to_vec());
    let degree = coeffs.len() - 1;
    if degree == 0 || coeffs[degree].norm() == 0.0 {
        return Err(PolyError::ZeroDegree);
    }
    let lead = coeffs[degree];
    let monic: Vec<C> = coeffs.iter().map(|c| c / lead).collect();
    let poly = ComplexPoly { coeffs: monic.clone(), roots: Vec::new() };

    // Cauchy bound for the initial circle; offset angle avoids symmetric stalls.
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..degree)
        .map(|k| C::from_polar(0.5 * radius, TAU * k as f64 / degree as f64 + 0.4))
        .collect();

    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..degree {
            let (p, dp) = poly.eval_with_derivative(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C = (0..degree)
                .filter(|&j| j != k)
                .map(|j| C::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (C::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly.eval_with_derivative(*zk);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let next = *zk - p / dp;
            if next.is_finite() {
                *zk = next;
            }
        }
    }

    check_separation(&z, num.sep_tol)?;
    let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let full = ComplexPoly { coeffs: coeffs.clone(), roots: Vec::new() };
    let worst = z.iter().map(|&r| full.eval(r).norm()).fold(0.0, f64::max);
    // Residual is judged relative to the local derivative scale as well, since
    // a correctly rounded simple root still has |p| ~ eps * |p'| * |z|.
    let slack = z
        .iter()
        .map(|&r| full.eval_with_derivative(r).1.norm() * (1.0 + r.norm()) * 1e-13)
        .fold(0.0, f64::max);
    if worst > num.root_tol * scale + slack {
        return Err(PolyError::NoConvergence(worst));
    }
    Ok(z)
}
