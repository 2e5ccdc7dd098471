//! Finite-difference weights, local polynomial interpolation and
//! Gauss–Legendre quadrature on polygonal paths.

use crate::polynomial::C;

/// Fornberg's weights for derivatives 0..=m at `x0` on arbitrary nodes.
/// Returns `w[k][j]`, the weight of node `j` for derivative `k`.
#[cfg(test)]
pub fn fornberg(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Fornberg weights for at most 5 nodes and derivatives up to 2.
pub fn fornberg5(x0: f64, nodes: &[f64]) -> [[f64; 5]; 3] {
    let n = nodes.len();
    debug_assert!(n <= 5);
    let mut c = [[0.0; 5]; 3];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(2);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Cumulative chord length along `points`, starting at 0.
pub fn chord_params(points: &[C]) -> Vec<f64> {
    let mut s = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    s.push(0.0);
    for w in points.windows(2) {
        acc += (w[1] - w[0]).norm();
        s.push(acc);
    }
    s
}

/// Index window of `width` consecutive nodes centred on `k`, clamped to `0..n`.
pub fn stencil(k: usize, n: usize, width: usize) -> std::ops::Range<usize> {
    let half = width / 2;
    let lo = k.saturating_sub(half).min(n - width);
    lo..lo + width
}

/// Value at parameter `x` of the cubic through the four nodes of `s`/`z`
/// nearest `x`.
pub fn cubic_at(s: &[f64], z: &[C], x: f64) -> C {
    let n = s.len();
    let k = match s.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => return z[i],
        Err(i) => i.clamp(1, n - 1) - 1,
    };
    let lo = if n < 4 { 0 } else { k.saturating_sub(1).min(n - 4) };
    let hi = (lo + 4).min(n);
    let mut acc = C::new(0.0, 0.0);
    for i in lo..hi {
        let mut l = 1.0;
        for j in lo..hi {
            if i != j {
                l *= (x - s[j]) / (s[i] - s[j]);
            }
        }
        acc += z[i] * l;
    }
    acc
}

/// Eight-point Gauss–Legendre nodes and weights on [0, 1].
pub const GAUSS8: [(f64, f64); 8] = {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    [
        (0.5 - 0.5 * X[3], 0.5 * W[3]),
        (0.5 - 0.5 * X[2], 0.5 * W[2]),
        (0.5 - 0.5 * X[1], 0.5 * W[1]),
        (0.5 - 0.5 * X[0], 0.5 * W[0]),
        (0.5 + 0.5 * X[0], 0.5 * W[0]),
        (0.5 + 0.5 * X[1], 0.5 * W[1]),
        (0.5 + 0.5 * X[2], 0.5 * W[2]),
        (0.5 + 0.5 * X[3], 0.5 * W[3]),
    ]
};

/// Quadrature nodes on a segment `a -> b` as `(t, weight * dt/dv)`.
///
/// With `sqrt_at_a`/`sqrt_at_b` the substitution `v -> v^2` (from the
/// respective end) absorbs a square-root endpoint singularity. A segment
/// singular at both ends is split at its midpoint.
pub fn segment_nodes(a: C, b: C, sqrt_at_a: bool, sqrt_at_b: bool) -> Vec<(C, C)> {
    let d = b - a;
    match (sqrt_at_a, sqrt_at_b) {
        (true, true) => {
            let m = a + d * 0.5;
            let mut v = segment_nodes(a, m, true, false);
            v.extend(segment_nodes(m, b, false, true));
            v
        }
        (true, false) => GAUSS8.iter().map(|&(v, w)| (a + d * (v * v), d * (2.0 * v * w))).collect(),
        (false, true) => GAUSS8
            .iter()
            .map(|&(v, w)| (b - d * (v * v), d * (2.0 * v * w)))
            .collect(),
        (false, false) => GAUSS8.iter().map(|&(v, w)| (a + d * v, d * w)).collect(),
    }
}
