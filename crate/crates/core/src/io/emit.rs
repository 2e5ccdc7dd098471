use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

use crate::flow::SeriesRecord;
use crate::polynomial::C;

pub const CSV_HEADER: &str = "tau,sup_theta,inf_theta,weighted_volume,min_root_dist,max_curvature_dc,dt,theta_bar,l2_phase_var";

/// Pretty JSON with a trailing newline. Re-reading and re-writing a file
/// produced here gives the same bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    std::fs::write(path, to_json(value))
}

pub fn series_csv(series: &[SeriesRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in series {
        let row = [
            r.tau,
            r.sup_theta,
            r.inf_theta,
            r.weighted_volume,
            r.min_root_dist,
            r.max_curvature_dc,
            r.dt,
            r.theta_bar,
            r.l2_phase_var,
        ];
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, series: &[SeriesRecord]) -> std::io::Result<()> {
    std::fs::write(path, series_csv(series))
}

/// A small deterministic SVG canvas in base-plane coordinates (y up).
pub struct Svg {
    lo: C,
    hi: C,
    scale: f64,
    body: String,
}

impl Svg {
    /// Canvas covering `points` with a 10% margin, 800 pixels on the long side.
    pub fn covering<'a>(points: impl IntoIterator<Item = &'a C>) -> Svg {
        let mut lo = C::new(f64::INFINITY, f64::INFINITY);
        let mut hi = C::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for z in points {
            lo = C::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        if !lo.re.is_finite() {
            lo = C::new(-1.0, -1.0);
            hi = C::new(1.0, 1.0);
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let pad = C::new(0.1 * span, 0.1 * span);
        let (lo, hi) = (lo - pad, hi + pad);
        let scale = 800.0 / (hi.re - lo.re).max(hi.im - lo.im);
        Svg { lo, hi, scale, body: String::new() }
    }

    fn xy(&self, z: C) -> (f64, f64) {
        ((z.re - self.lo.re) * self.scale, (self.hi.im - z.im) * self.scale)
    }

    pub fn polyline(&mut self, points: &[C], stroke: &str, width: f64) {
        let mut d = String::new();
        for &z in points {
            let (x, y) = self.xy(z);
            let _ = write!(d, "{x:.3},{y:.3} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            d.trim_end()
        );
    }

    pub fn dot(&mut self, z: C, radius: f64, fill: &str) {
        let (x, y) = self.xy(z);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}" fill="{fill}"/>"#);
    }

    pub fn text(&mut self, z: C, label: &str) {
        let (x, y) = self.xy(z);
        let _ = writeln!(self.body, r#"<text x="{:.3}" y="{:.3}" font-size="14" font-family="monospace">{label}</text>"#, x + 6.0, y - 6.0);
    }

    pub fn finish(&self) -> String {
        let w = (self.hi.re - self.lo.re) * self.scale;
        let h = (self.hi.im - self.lo.im) * self.scale;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Curves in black over light reference connectors, roots as dots.
pub fn scene(roots: &[C], curves: &[&[C]], references: &[&[C]], caption: &str) -> String {
    let mut svg = Svg::covering(roots.iter().chain(curves.iter().flat_map(|c| c.iter())));
    for r in references {
        svg.polyline(r, "#bbbbbb", 1.5);
    }
    for c in curves {
        svg.polyline(c, "black", 2.0);
    }
    for &z in roots {
        svg.dot(z, 4.0, "#c0392b");
    }
    if !caption.is_empty() {
        svg.text(svg.lo + C::new(0.02, 0.02) * (svg.hi - svg.lo).norm(), caption);
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let r = SeriesRecord {
            tau: 0.5,
            sup_theta: 0.1,
            inf_theta: -0.1,
            weighted_volume: 2.0,
            min_root_dist: 0.3,
            max_curvature_dc: 1.0,
            dt: 1e-5,
            theta_bar: 0.0,
            l2_phase_var: 1e-3,
        };
        let csv = series_csv(&[r]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        let cells: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells, vec![0.5, 0.1, -0.1, 2.0, 0.3, 1.0, 1e-5, 0.0, 1e-3]);
    }

    #[test]
    fn svg_is_deterministic() {
        let roots = [C::new(-1.0, 0.0), C::new(1.0, 0.0)];
        let a = scene(&roots, &[&roots], &[], "t");
        assert_eq!(a, scene(&roots, &[&roots], &[], "t"));
        assert!(a.starts_with("<svg") && a.contains("polyline") && a.matches("<circle").count() == 2);
    }
}
