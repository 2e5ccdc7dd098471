use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::class::{lasso_path, mean_phase, normalise, turns, values, winding_number, LagClass, Winding};
use crate::curve::MarkedCurve;
use crate::error::FloerError;
use crate::geometry::{period_along, phase_profile, weighted_volume};
use crate::numerics::Numerics;
use crate::polynomial::{lift_args, nearest_lift, ComplexPoly, C};
use crate::slag::{slag_connect, start_direction, Connector};

/// A graded splitting `L = first # second` through an intermediate root.
///
/// Which piece is the subobject depends on the side of the root the class
/// passes: when the root lies to the right of the class the first piece is
/// the sub.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Splitting {
    pub root: usize,
    pub first: LagClass,
    pub second: LagClass,
    pub sub_first: bool,
    /// Whether a constant-phase connector was found for each piece; `None`
    /// for pieces with windings, which are not searched.
    pub slag: [Option<bool>; 2],
}

impl Splitting {
    pub fn sub(&self) -> &LagClass {
        if self.sub_first {
            &self.first
        } else {
            &self.second
        }
    }

    pub fn quotient(&self) -> &LagClass {
        if self.sub_first {
            &self.second
        } else {
            &self.first
        }
    }

    /// The sub has phase at least that of the quotient.
    pub fn destabilising(&self) -> bool {
        self.sub().phi >= self.quotient().phi
    }
}

const ADDITIVITY_TOL: f64 = 1e-6;

/// All winding words of total length at most `bound` over `roots`.
fn words(roots: &[usize], bound: usize) -> Vec<Vec<Winding>> {
    let mut out = vec![Vec::new()];
    for &r in roots {
        let mut next = Vec::new();
        for w in &out {
            let used: usize = w.iter().map(|&(_, m): &Winding| m.unsigned_abs() as usize).sum();
            let room = (bound - used) as i64;
            for m in -room..=room {
                let mut v = w.clone();
                if m != 0 {
                    v.push((r, m));
                }
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Samples of a spiral around `c` from `from` to `to` sweeping `sweep`.
fn detour(c: C, from: C, to: C, sweep: f64) -> Vec<C> {
    let (r0, r1) = ((from - c).norm(), (to - c).norm());
    let a0 = (from - c).arg();
    let count = ((sweep.abs() / (TAU / 128.0)).ceil() as usize).max(4);
    (1..count)
        .map(|k| {
            let u = k as f64 / count as f64;
            c + C::from_polar(r0 + (r1 - r0) * u, a0 + sweep * u)
        })
        .collect()
}

/// Pieces of `class` split through root `c` with the first piece carrying
/// the winding word `w1`.
fn split(class: &LagClass, p: &ComplexPoly, c: usize, w1: Vec<Winding>) -> Result<Splitting, FloerError> {
    let n = class.n;
    let (a, b) = class.root_pair;
    let roots = p.roots();
    let (za, zb, zc) = (roots[a], roots[b], roots[c]);
    let cross = ((zb - za).conj() * (zc - za)).im;
    // Half-integer turns of the class around c: +1/2 means c on the left.
    let side = turns(&class.winding, c) as f64 + 0.5 * cross.signum();
    let triangle = [za, zc, zb];
    let mut w2: Vec<Winding> = class.winding.iter().filter(|&&(r, _)| r != c).copied().collect();
    for r in 0..roots.len() {
        if r != a && r != b && r != c {
            let t = winding_number(&triangle, roots[r]).round() as i64;
            w2.push((r, -t));
        }
    }
    w2.extend(w1.iter().map(|&(r, m)| (r, -m)));
    let w1 = normalise(w1);
    let w2 = normalise(w2);

    let (rep, offset) = class.representative(p)?;
    let p1 = lasso_path(p, a, c, &w1)?;
    let p2 = lasso_path(p, c, b, &w2)?;
    let turn_a = ((zc - za) / (zb - za)).arg();
    let m1 = p1.len();
    let u_in = (zc - za).arg();
    let u_out = (zb - zc).arg();
    let ccw = (u_out - u_in - PI).rem_euclid(TAU);
    let sweep = ccw + TAU * (side - 0.5);
    let turn_c = sweep - PI * sweep.signum();

    let mut gamma: Vec<C> = p1[1..m1 - 1].to_vec();
    gamma.extend(detour(zc, p1[m1 - 2], p2[1], sweep));
    let join = gamma.len();
    gamma.extend_from_slice(&p2[1..]);
    let start = nearest_lift(p.eval(gamma[0]).arg(), rep.start_arg + turn_a);
    let args = lift_args(&values(p, &gamma[..gamma.len() - 1]), Some(start))?;

    let t1 = (zb - za).arg() + offset + turn_a;
    let t2 = t1 + turn_c;
    let period1 = period_along(&p1, p, n, start)?;
    let period2 = period_along(&p2, p, n, args[join])?;
    let mean1 = mean_phase(p, n, &gamma[..m1 - 2], &args[..m1 - 2], t1);
    let mean2 = mean_phase(p, n, &gamma[join..gamma.len() - 1], &args[join..], t2);
    let first = LagClass { n, root_pair: (a, c), winding: w1, period: period1, phi: nearest_lift(period1.arg(), mean1) };
    let second = LagClass { n, root_pair: (c, b), winding: w2, period: period2, phi: nearest_lift(period2.arg(), mean2) };
    Ok(Splitting { root: c, first, second, sub_first: side < 0.0, slag: [None, None] })
}

/// The constant-phase connector representing a winding-free class, searched
/// within 0.1 of the class phase on the branch leaving along the chord.
pub fn class_connector(class: &LagClass, p: &ComplexPoly, num: &Numerics) -> Option<Connector> {
    if !class.winding.is_empty() {
        return None;
    }
    let (a, b) = class.root_pair;
    let za = p.roots()[a];
    let heading = (p.roots()[b] - za).arg();
    let branches = 2 * class.n as i64;
    let off = |k: i64| (nearest_lift(start_direction(p, class.n, za, class.phi, k), heading) - heading).abs();
    let k = (-branches..=branches).min_by(|&i, &j| off(i).total_cmp(&off(j))).unwrap_or(0);
    slag_connect(p, class.n, a, b, [class.phi - 0.1, class.phi + 0.1], k, num).ok()
}

fn has_slag(class: &LagClass, p: &ComplexPoly, num: &Numerics) -> Option<bool> {
    if !class.winding.is_empty() {
        return None;
    }
    Some(class_connector(class, p, num).is_some())
}

/// Graded splittings of `class` through every other root, one per winding
/// word of length at most `bound` on the first piece. Roots whose chords
/// would pass through another root are skipped, as are candidates whose
/// piece periods do not add up to the class period: for odd `n` the
/// winding list does not record the order of loops, and some orders are not
/// splittings of the class.
pub fn enumerate_splittings(class: &LagClass, p: &ComplexPoly, bound: usize, num: &Numerics) -> Result<Vec<Splitting>, FloerError> {
    let (a, b) = class.root_pair;
    let mut out = Vec::new();
    for c in 0..p.degree() {
        if c == a || c == b {
            continue;
        }
        let others: Vec<usize> = (0..p.degree()).filter(|&r| r != a && r != b && r != c).collect();
        for w1 in words(&others, bound) {
            match split(class, p, c, w1) {
                Ok(mut s) => {
                    if (s.first.period + s.second.period - class.period).norm() > ADDITIVITY_TOL * class.volume() {
                        continue;
                    }
                    s.slag = [has_slag(&s.first, p, num), has_slag(&s.second, p, num)];
                    out.push(s);
                }
                Err(FloerError::ChordThroughRoot(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Verdicts for one splitting; `phi1` is the sub, `phi2` the quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingVerdict {
    pub root: usize,
    pub winding: Vec<Winding>,
    pub phi1: f64,
    pub phi2: f64,
    pub close_ok: bool,
    pub vclose_ok: bool,
    pub ineq_filtered: bool,
    pub destabilising: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub class: LagClass,
    pub sup_theta: f64,
    pub inf_theta: f64,
    pub weighted_volume: f64,
    pub winding_bound: usize,
    pub splittings: Vec<SplittingVerdict>,
    pub close_ok: bool,
    pub vclose_ok: bool,
}

/// Evaluates the phase-interval condition, the volume condition and the
/// phase pre-filter for every splitting of the curve's class.
///
/// The phase condition fails when the interval `[phi(sub), phi(quotient)]`
/// lies inside `(inf theta, sup theta)`; an interval with `phi(sub) >
/// phi(quotient)` is empty and so always fails. The volume condition asks
/// for `W <= |period(sub)| + |period(quotient)|`. A splitting is filtered
/// when its phases do not both lie in `[inf theta, sup theta]`.
pub fn check_stability(curve: &MarkedCurve, p: &ComplexPoly, n: usize, bound: usize, num: &Numerics) -> Result<StabilityReport, FloerError> {
    let prof = phase_profile(curve, p, n)?;
    let volume = weighted_volume(curve, p, n);
    let class = LagClass::of_curve(curve, p, n)?;
    let splittings = enumerate_splittings(&class, p, bound, num)?;
    let verdicts: Vec<SplittingVerdict> = splittings
        .iter()
        .map(|s| {
            let (phi1, phi2) = (s.sub().phi, s.quotient().phi);
            let inside = phi1 > prof.inf && phi2 < prof.sup;
            let (lo, hi) = (phi1.min(phi2), phi1.max(phi2));
            SplittingVerdict {
                root: s.root,
                winding: s.first.winding.clone(),
                phi1,
                phi2,
                close_ok: phi1 <= phi2 && !inside,
                vclose_ok: volume <= s.first.volume() + s.second.volume(),
                ineq_filtered: !(prof.inf <= lo && hi <= prof.sup),
                destabilising: s.destabilising(),
            }
        })
        .collect();
    Ok(StabilityReport {
        close_ok: verdicts.iter().all(|v| v.close_ok),
        vclose_ok: verdicts.iter().all(|v| v.vclose_ok),
        class,
        sup_theta: prof.sup,
        inf_theta: prof.inf,
        weighted_volume: volume,
        winding_bound: bound,
        splittings: verdicts,
    })
}

/// Greedy Jordan–Hölder decomposition: split off the destabilising sub of
/// largest phase (smallest volume on ties) and recurse on both pieces.
pub fn jordan_holder(class: &LagClass, p: &ComplexPoly, bound: usize, num: &Numerics) -> Result<Vec<LagClass>, FloerError> {
    let guard = p.degree() * (2 * bound + 1);
    decompose(class, p, bound, num, 0, guard)
}

fn decompose(class: &LagClass, p: &ComplexPoly, bound: usize, num: &Numerics, depth: usize, guard: usize) -> Result<Vec<LagClass>, FloerError> {
    if depth > guard {
        return Err(FloerError::NonTerminating(guard));
    }
    let splittings = enumerate_splittings(class, p, bound, num)?;
    let best = splittings.into_iter().filter(Splitting::destabilising).max_by(|x, y| {
        x.sub()
            .phi
            .total_cmp(&y.sub().phi)
            .then_with(|| y.sub().volume().total_cmp(&x.sub().volume()))
    });
    let Some(s) = best else {
        return Ok(vec![class.clone()]);
    };
    let mut out = decompose(s.sub(), p, bound, num, depth + 1, guard)?;
    out.extend(decompose(s.quotient(), p, bound, num, depth + 1, guard)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn three_roots() -> ComplexPoly {
        ComplexPoly::from_roots(&[c(-1.0, 0.0), c(0.0, 0.2), c(1.0, 0.0)], c(1.0, 0.0), &Numerics::default()).unwrap()
    }

    #[test]
    fn words_count() {
        assert_eq!(words(&[3, 4], 0).len(), 1);
        assert_eq!(words(&[3, 4], 1).len(), 5);
        assert_eq!(words(&[3], 2).len(), 5);
    }

    #[test]
    fn straight_pieces_through_the_middle_root() {
        let p = three_roots();
        let num = Numerics::default();
        let arc = MarkedCurve::arc(&p, 0, 2, 0.5, 400).unwrap();
        let class = LagClass::of_curve(&arc, &p, 2).unwrap();
        let s = enumerate_splittings(&class, &p, 0, &num).unwrap();
        assert_eq!(s.len(), 1);
        let s = &s[0];
        assert!((s.first.phi - 0.2f64.atan()).abs() < 1e-12);
        assert!((s.second.phi + 0.2f64.atan()).abs() < 1e-12);
        assert!((s.first.period + s.second.period - class.period).norm() < 1e-12);
        assert!(s.sub_first && s.destabilising());
        assert_eq!(s.slag, [Some(true), Some(true)]);
    }

    #[test]
    fn two_roots_have_no_splittings() {
        let p = ComplexPoly::from_roots(&[c(-1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), &Numerics::default()).unwrap();
        let class = LagClass::chord(&p, 2, 0, 1).unwrap();
        assert!(enumerate_splittings(&class, &p, 1, &Numerics::default()).unwrap().is_empty());
    }

    #[test]
    fn exactly_one_side_satisfies_close() {
        let p = three_roots();
        let num = Numerics::default();
        let above = MarkedCurve::arc(&p, 0, 2, 0.5, 400).unwrap();
        let below = MarkedCurve::arc(&p, 0, 2, -0.04, 400).unwrap();
        let ra = check_stability(&above, &p, 2, 0, &num).unwrap();
        let rb = check_stability(&below, &p, 2, 0, &num).unwrap();
        assert!(!ra.close_ok && ra.splittings[0].destabilising);
        assert!(rb.close_ok && !rb.splittings[0].destabilising);
        assert!(!ra.vclose_ok);
    }

    #[test]
    fn decomposition_of_both_sides() {
        let p = three_roots();
        let num = Numerics::default();
        let above = LagClass::of_curve(&MarkedCurve::arc(&p, 0, 2, 0.5, 400).unwrap(), &p, 2).unwrap();
        let pieces = jordan_holder(&above, &p, 1, &num).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!((pieces[0].root_pair, pieces[1].root_pair), ((0, 1), (1, 2)));
        assert!(pieces[0].phi > pieces[1].phi);
        let total: C = pieces.iter().map(|c| c.period).sum();
        assert!((total - above.period).norm() < 1e-12);
        let below = LagClass::of_curve(&MarkedCurve::arc(&p, 0, 2, -0.5, 400).unwrap(), &p, 2).unwrap();
        assert_eq!(jordan_holder(&below, &p, 1, &num).unwrap(), vec![below]);
    }

    #[test]
    fn periods_add_up() {
        let roots = [c(-1.0, 0.0), c(0.1, 0.4), c(1.0, -0.1), c(0.2, -0.9)];
        let p = ComplexPoly::from_roots(&roots, c(1.0, 0.0), &Numerics::default()).unwrap();
        let num = Numerics { winding_bound: 1, ..Numerics::default() };
        for n in [2, 3, 4, 5] {
            for w in [vec![], vec![(1, 1)], vec![(3, -1)]] {
                let class = LagClass::with_winding(&p, n, 0, 2, w.clone()).unwrap();
                let found = enumerate_splittings(&class, &p, 1, &num).unwrap();
                if n % 2 == 0 {
                    // Two intermediate roots, three words each.
                    assert_eq!(found.len(), 6);
                }
                for s in found {
                    let err = (s.first.period + s.second.period - class.period).norm() / class.volume();
                    assert!(err < 1e-8, "n={n} w={w:?} root={} {:?} {:?} err={err}", s.root, s.first.winding, s.second.winding);
                }
            }
        }
    }
}
