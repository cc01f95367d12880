//! Minimal SVG output: a histogram and a line chart, nothing else.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Range padded so that a constant series still gets a visible extent.
fn padded_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return None;
    }
    if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.5 * (1.0 + lo.abs());
        Some((lo - pad, hi + pad))
    } else {
        Some((lo, hi))
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open(out: &mut String, title: &str, xlabel: &str, ylabel: &str, frame: &Frame) {
    let (w, h, m) = (WIDTH, HEIGHT, MARGIN);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ =
        writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(out, r#"<line x1="{m}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, h - m, w - m, h - m);
    let _ = writeln!(out, r#"<line x1="{m}" y1="{m}" x2="{m}" y2="{}" stroke="black"/>"#, h - m);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, w / 2.0, h - 12.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        escape(ylabel)
    );
    for (x, anchor) in [(frame.x.0, "start"), (frame.x.1, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="{anchor}">{}</text>"#,
            frame.px(x),
            h - m + 16.0,
            tick(x)
        );
    }
    for y in [frame.y.0, frame.y.1] {
        let _ =
            writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, m - 4.0, frame.py(y) + 4.0, tick(y));
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Histogram of the finite values with `bins` equal-width bins.
pub fn histogram(values: &[f64], bins: usize, title: &str, xlabel: &str) -> String {
    let bins = bins.max(1);
    let range = padded_range(values.iter().copied()).unwrap_or((0.0, 1.0));
    let mut counts = vec![0usize; bins];
    for v in values.iter().filter(|v| v.is_finite()) {
        let t = ((v - range.0) / (range.1 - range.0) * bins as f64).floor() as usize;
        counts[t.min(bins - 1)] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let frame = Frame { x: range, y: (0.0, top) };
    let mut out = String::new();
    open(&mut out, title, xlabel, "count", &frame);
    let width = (range.1 - range.0) / bins as f64;
    for (b, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x0 = frame.px(range.0 + b as f64 * width);
        let x1 = frame.px(range.0 + (b + 1) as f64 * width);
        let y = frame.py(c as f64);
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="white"/>"#,
            x1 - x0,
            frame.py(0.0) - y,
            COLOURS[0]
        );
    }
    out.push_str("</svg>\n");
    out
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Line chart, one polyline per series; non-finite points are dropped.
pub fn line_chart(series: &[Series], title: &str, xlabel: &str, ylabel: &str) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().filter(|p| p.0.is_finite()).map(|p| p.1));
    let frame = Frame { x: padded_range(xs).unwrap_or((0.0, 1.0)), y: padded_range(ys).unwrap_or((0.0, 1.0)) };
    let mut out = String::new();
    open(&mut out, title, xlabel, ylabel, &frame);
    for (k, s) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let _ =
            writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = MARGIN + 14.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly:.0}" text-anchor="end" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_counts_every_finite_value() {
        let svg = histogram(&[0.0, 0.1, 0.1, 1.0, f64::NAN], 2, "gaps", "gap");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches(r#"stroke="white"/>"#).count(), 2);
    }

    #[test]
    fn constant_data_is_drawable() {
        let svg = histogram(&[0.0; 5], 10, "t", "x");
        assert!(!svg.contains("NaN"));
        let s = Series { label: "a<b".into(), points: vec![(0.0, 1.0), (1.0, 1.0)] };
        let svg = line_chart(&[s], "t", "x", "y");
        assert!(svg.contains("<polyline") && svg.contains("a&lt;b"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn empty_input() {
        assert!(!histogram(&[], 4, "t", "x").contains("<rect x"));
        assert!(!line_chart(&[], "t", "x", "y").contains("<polyline"));
    }
}
