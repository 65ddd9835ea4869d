//! CSV and SVG emitters. All output is deterministic: no timestamps, and
//! floats use Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Per-task entry of the run report.
#[derive(Debug, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub pass: bool,
    pub details: Vec<String>,
    pub artifacts: Vec<String>,
}

/// One machine-readable document per run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub resolution: usize,
    pub tolerance: f64,
    pub pass: bool,
    pub tasks: Vec<TaskReport>,
}

pub fn write_report(dir: &Path, report: &RunReport) -> io::Result<PathBuf> {
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

/// Write a CSV file; the header row names columns and units.
pub fn write_csv(dir: &Path, name: &str, header: &str, rows: &[Vec<String>]) -> io::Result<PathBuf> {
    let path = dir.join(name);
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(&path, out)?;
    Ok(path)
}

pub fn fmt_f(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

/// Minimal self-contained SVG builder (inline styles, no external assets).
pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg { width, height, body: String::new() }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        writeln!(
            self.body,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width}" />"#
        )
        .unwrap();
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut points = String::new();
        for (x, y) in pts {
            write!(points, "{x:.2},{y:.2} ").unwrap();
        }
        writeln!(
            self.body,
            r#"  <polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}" />"#,
            points.trim_end()
        )
        .unwrap();
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, stroke: &str, fill: &str) {
        writeln!(
            self.body,
            r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" stroke="{stroke}" stroke-width="1" fill="{fill}" />"#
        )
        .unwrap();
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, fill: &str, content: &str) {
        let escaped = content.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        writeln!(
            self.body,
            r#"  <text x="{x:.2}" y="{y:.2}" font-family="monospace" font-size="{size}" fill="{fill}">{escaped}</text>"#
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\" />\n{body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

const DISC_SIZE: f64 = 520.0;

fn disc_xy(z: Complex64) -> (f64, f64) {
    // unit disc mapped to the canvas, imaginary axis pointing up
    let s = DISC_SIZE / 2.4;
    (DISC_SIZE / 2.0 + s * z.re, DISC_SIZE / 2.0 - s * z.im)
}

/// A disc-side plot: boundary circle plus labeled point sequences.
pub fn disc_plot(
    dir: &Path,
    name: &str,
    title: &str,
    series: &[(String, Vec<Complex64>, bool)],
) -> io::Result<PathBuf> {
    let mut svg = Svg::new(DISC_SIZE, DISC_SIZE + 20.0 * series.len() as f64 + 30.0);
    let (cx, cy) = (DISC_SIZE / 2.0, DISC_SIZE / 2.0);
    svg.circle(cx, cy, DISC_SIZE / 2.4, "#333333", "none");
    svg.text(10.0, 18.0, 13.0, "#333333", title);
    for (i, (label, pts, connect)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let xy: Vec<(f64, f64)> = pts.iter().map(|&z| disc_xy(z)).collect();
        if *connect {
            svg.polyline(&xy, color, 1.2);
        }
        for &(x, y) in &xy {
            svg.circle(x, y, 2.2, color, color);
        }
        let ly = DISC_SIZE + 18.0 + 20.0 * i as f64;
        svg.circle(16.0, ly - 4.0, 4.0, color, color);
        svg.text(28.0, ly, 12.0, "#333333", label);
    }
    let path = dir.join(name);
    fs::write(&path, svg.finish())?;
    Ok(path)
}

/// An x-y curve plot with axes; several labeled series.
pub fn curve_plot(
    dir: &Path,
    name: &str,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> io::Result<PathBuf> {
    let (w, h) = (640.0, 420.0);
    let margin = 50.0;
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !(xmin < xmax) {
        xmax = xmin + 1.0;
    }
    if !(ymin < ymax) {
        ymax = ymin + 1.0;
    }
    let to_xy = |x: f64, y: f64| {
        (
            margin + (x - xmin) / (xmax - xmin) * (w - 2.0 * margin),
            h - margin - (y - ymin) / (ymax - ymin) * (h - 2.0 * margin),
        )
    };
    let mut svg = Svg::new(w, h + 20.0 * series.len() as f64);
    svg.text(10.0, 18.0, 13.0, "#333333", title);
    // axes with end-value ticks
    svg.line(margin, h - margin, w - margin, h - margin, "#333333", 1.0);
    svg.line(margin, margin, margin, h - margin, "#333333", 1.0);
    svg.text(w - margin - 10.0, h - margin + 18.0, 11.0, "#333333", &fmt_short(xmax));
    svg.text(margin - 4.0, h - margin + 18.0, 11.0, "#333333", &fmt_short(xmin));
    svg.text(6.0, margin + 4.0, 11.0, "#333333", &fmt_short(ymax));
    svg.text(6.0, h - margin, 11.0, "#333333", &fmt_short(ymin));
    svg.text(w / 2.0, h - 12.0, 12.0, "#333333", x_label);
    svg.text(8.0, h / 2.0, 12.0, "#333333", y_label);
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let xy: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| to_xy(x, y)).collect();
        svg.polyline(&xy, color, 1.4);
        let ly = h + 14.0 + 20.0 * i as f64;
        svg.circle(16.0, ly - 4.0, 4.0, color, color);
        svg.text(28.0, ly, 12.0, "#333333", label);
    }
    let path = dir.join(name);
    fs::write(&path, svg.finish())?;
    Ok(path)
}

fn fmt_short(v: f64) -> String {
    format!("{v:.3}")
}
