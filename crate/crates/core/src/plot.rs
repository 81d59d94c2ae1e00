//! Deterministic SVG rendering of plottable report series: trajectories
//! (polylines), point clouds (dots) and curves (polylines with markers).

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::report::{write_atomic, Report};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("report has no plottable series (trajectory, trajectories, midpoints or margin_curve)")]
    NothingPlottable,
    #[error("cannot write plot: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Line,
    Dots,
    Curve,
}

struct Series {
    label: String,
    style: Style,
    points: Vec<[f64; 2]>,
}

fn points(v: &Value) -> Option<Vec<[f64; 2]>> {
    let arr = v.as_array()?;
    let pts: Vec<[f64; 2]> = arr
        .iter()
        .filter_map(|p| {
            let p = p.as_array()?;
            Some([p.first()?.as_f64()?, p.get(1)?.as_f64()?])
        })
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .collect();
    (!pts.is_empty()).then_some(pts)
}

fn collect_series(outputs: &Value) -> Vec<Series> {
    let mut out = Vec::new();
    if let Some(p) = outputs.get("trajectory").and_then(points) {
        out.push(Series { label: "trajectory".into(), style: Style::Line, points: p });
    }
    if let Some(list) = outputs.get("trajectories").and_then(Value::as_array) {
        for (i, t) in list.iter().enumerate() {
            if let Some(p) = points(t) {
                out.push(Series { label: format!("trajectory {}", i + 1), style: Style::Line, points: p });
            }
        }
    }
    if let Some(p) = outputs.get("midpoints").and_then(points) {
        out.push(Series { label: "midpoints".into(), style: Style::Dots, points: p });
    }
    if let Some(p) = outputs.get("margin_curve").and_then(points) {
        out.push(Series { label: "margin vs l".into(), style: Style::Curve, points: p });
    }
    out
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Renders the plottable series of `report` with a fixed viewport and styling.
pub fn render_svg(report: &Report) -> Result<String, PlotError> {
    let series = collect_series(&report.outputs);
    if series.is_empty() {
        return Err(PlotError::NothingPlottable);
    }
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let pad = |lo: f64, hi: f64| if hi - lo < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let ((x0, x1), (y0, y1)) = (pad(x0, x1), pad(y0, y1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{:.3}" height="{:.3}" fill="none" stroke="#444"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN}" y="24" font-family="monospace" font-size="12">{} | x [{x0:.4}, {x1:.4}] y [{y0:.4}, {y1:.4}]</text>"#,
        report.command
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = s.points.iter().map(|p| format!("{:.3},{:.3}", sx(p[0]), sy(p[1]))).collect();
        if s.style != Style::Dots {
            let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        }
        if s.style != Style::Line {
            for p in &s.points {
                let _ = writeln!(svg, r#"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="{color}"/>"#, sx(p[0]), sy(p[1]));
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="11" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 140.0,
            MARGIN + 16.0 + 14.0 * i as f64,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(report: &Report, path: &Path) -> Result<(), PlotError> {
    let svg = render_svg(report)?;
    write_atomic(path, svg.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_rejected() {
        assert!(matches!(render_svg(&Report::new("x")), Err(PlotError::NothingPlottable)));
    }

    #[test]
    fn polyline_and_determinism() {
        let mut r = Report::new("grushin geodesic");
        r.output("trajectory", vec![[0.0, 0.0], [0.5, 0.1], [1.0, 0.0]]);
        let a = render_svg(&r).unwrap();
        assert!(a.contains("<polyline") && !a.contains("<circle"));
        assert_eq!(a, render_svg(&r).unwrap());
        let mut c = Report::new("grushin bm");
        c.output("margin_curve", vec![[10.0, 9.0], [25.0, 24.0], [50.0, 49.0]]);
        c.output("midpoints", vec![[0.1, 0.2]]);
        let s = render_svg(&c).unwrap();
        assert_eq!(s.matches("<circle").count(), 4);
    }

    #[test]
    fn writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("p");
        r.output("trajectory", vec![[0.0, 0.0], [1.0, 1.0]]);
        let path = dir.path().join("out.svg");
        emit_plot(&r, &path).unwrap();
        assert!(std::fs::read_to_string(path).unwrap().starts_with("<svg"));
    }
}
