//! Static picture of a report: disks in the complex plane, the real axis,
//! certified intervals as bold segments and refined intervals as ticks.

use std::fmt::Write as _;
use std::path::Path;

use certeig::error::Result;
use certeig::localize::{DiskKind, DiskVerdict, IntervalVerdict};
use certeig::numerics::{parse_decimal, Scalar};

use crate::report::Report;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

fn value(text: &str) -> f64 {
    parse_decimal(text).map(|r| r.to_f64()).unwrap_or(f64::NAN)
}

struct View {
    x0: f64,
    y_max: f64,
    scale: f64,
    height: f64,
}

impl View {
    fn new(report: &Report) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut r_max: f64 = 0.0;
        for d in &report.disks {
            let (c, r) = (value(&d.center), value(&d.radius));
            lo = lo.min(c - r);
            hi = hi.max(c + r);
            r_max = r_max.max(r);
        }
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (-1.0, 1.0);
        }
        if hi - lo < 1e-9 {
            (lo, hi) = (lo - 1.0, hi + 1.0);
        }
        let pad = 0.05 * (hi - lo);
        let (x0, x1) = (lo - pad, hi + pad);
        let y_max = r_max.max(0.1 * (x1 - x0)) + pad;
        let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
        View { x0, y_max, scale, height: 2.0 * y_max * scale + 2.0 * MARGIN }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x0) * self.scale
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + (self.y_max - v) * self.scale
    }
}

/// Deterministic SVG 1.1 text: report order is already canonical and every
/// coordinate is printed with fixed precision.
pub fn render_svg(report: &Report) -> String {
    let v = View::new(report);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}">"#,
        h = v.height
    );
    let _ = writeln!(
        s,
        r#"<style>.disk{{fill:none;stroke:#999;stroke-width:1}} .certified{{fill:#4a90d9;fill-opacity:0.12;stroke:#1f5fa8;stroke-width:2}} .column{{stroke-dasharray:4 3}} .axis{{stroke:#000;stroke-width:1}} .interval{{stroke:#c0392b;stroke-width:5}} .refined{{stroke:#000;stroke-width:2}} .point{{fill:#c0392b}}</style>"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH:.0}" height="{:.0}" fill="white"/>"#, v.height);
    let _ = writeln!(s, r#"<line class="axis" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#, MARGIN, WIDTH - MARGIN, y = v.y(0.0));

    for d in &report.disks {
        let mut class = String::from("disk");
        if d.verdict == Some(DiskVerdict::ContainsReal) {
            class.push_str(" certified");
        }
        if d.kind == DiskKind::Column {
            class.push_str(" column");
        }
        // zero-radius disks show up below as point eigenvalues
        if d.verdict == Some(DiskVerdict::PointEigenvalue) {
            continue;
        }
        let (c, r) = (value(&d.center), value(&d.radius));
        let _ = writeln!(s, r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#, v.x(c), v.y(0.0), r * v.scale);
    }
    for iv in report.initial_intervals.iter().filter(|iv| iv.verdict == IntervalVerdict::ContainsReal) {
        let _ = writeln!(
            s,
            r#"<line class="interval" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#,
            v.x(value(&iv.lo)),
            v.x(value(&iv.hi)),
            y = v.y(0.0)
        );
    }
    for iv in &report.final_intervals {
        let x = v.x(0.5 * (value(&iv.lo) + value(&iv.hi)));
        let _ = writeln!(s, r#"<line class="refined" x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}"/>"#, v.y(0.0) - 8.0, v.y(0.0) + 8.0);
    }
    for p in &report.point_eigenvalues {
        let _ = writeln!(s, r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="4"/>"#, v.x(value(p)), v.y(0.0));
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(report: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(report))?;
    Ok(())
}
