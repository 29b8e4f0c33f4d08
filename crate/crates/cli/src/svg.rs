//! Minimal self-contained SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;
const COLORS: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50",
];

pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dashed: bool,
    pub color: usize,
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    s
}

fn axes(s: &mut String, x: (f64, f64), y: (f64, f64), xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}">{:.3}</text>"#,
        H - PAD + 14.0,
        x.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
        W - PAD,
        H - PAD + 14.0,
        x.1
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
        PAD - 4.0,
        H - PAD,
        y.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
        PAD - 4.0,
        PAD + 8.0,
        y.1
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn map(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

/// Line chart; long series are thinned to at most 2000 points.
pub fn lines(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let xr = range(series.iter().flat_map(|s| s.x.iter().copied()));
    let yr = range(series.iter().flat_map(|s| s.y.iter().copied()));
    let mut s = open(title);
    axes(&mut s, xr, yr, xlabel, ylabel);
    for (i, ser) in series.iter().enumerate() {
        let step = (ser.x.len() / 2000).max(1);
        let pts: Vec<String> = ser
            .x
            .iter()
            .zip(&ser.y)
            .step_by(step)
            .map(|(&x, &y)| {
                format!(
                    "{:.1},{:.1}",
                    map(x, xr, PAD, W - PAD),
                    map(y, yr, H - PAD, PAD)
                )
            })
            .collect();
        let color = COLORS[ser.color % COLORS.len()];
        let dash = if ser.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            pts.join(" ")
        );
        let ly = PAD + 14.0 + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{}</text>"#,
            PAD + 8.0,
            ly - 4.0,
            PAD + 30.0,
            ly - 4.0,
            PAD + 34.0,
            ly,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Grey-scale heat map of `(x, y, value)` cells on a rectilinear grid.
pub fn heatmap(title: &str, xlabel: &str, ylabel: &str, cells: &[(f64, f64, f64)]) -> String {
    let mut xs: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let mut ys: Vec<f64> = cells.iter().map(|c| c.1).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
    }
    let vr = range(cells.iter().map(|c| c.2));
    let mut s = open(title);
    axes(
        &mut s,
        range(xs.iter().copied()),
        range(ys.iter().copied()),
        xlabel,
        ylabel,
    );
    let cw = (W - 2.0 * PAD) / xs.len().max(1) as f64;
    let ch = (H - 2.0 * PAD) / ys.len().max(1) as f64;
    for &(x, y, v) in cells {
        let i = xs.iter().position(|&a| a == x).unwrap_or(0);
        let j = ys.iter().position(|&a| a == y).unwrap_or(0);
        let shade = (255.0 * (1.0 - map(v, vr, 0.0, 1.0))).clamp(0.0, 255.0) as u8;
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="rgb({shade},{shade},{shade})"/>"#,
            PAD + i as f64 * cw,
            H - PAD - (j + 1) as f64 * ch,
            cw + 0.2,
            ch + 0.2
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Horizontal bars, one per `(label, value)`.
pub fn bars(title: &str, items: &[(String, f64)]) -> String {
    let h = (PAD * 2.0 + 18.0 * items.len() as f64).max(H);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{h}" viewBox="0 0 {W} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let max = items
        .iter()
        .map(|i| i.1.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mid = W * 0.7;
    let half = W * 0.28;
    let _ = writeln!(
        s,
        r#"<line x1="{mid}" y1="{PAD}" x2="{mid}" y2="{}" stroke="black"/>"#,
        h - PAD
    );
    for (i, (label, v)) in items.iter().enumerate() {
        let y = PAD + 18.0 * i as f64;
        let len = v.abs() / max * half * 0.95;
        let x = if *v < 0.0 { mid - len } else { mid };
        let color = if *v < 0.0 { COLORS[1] } else { COLORS[0] };
        let _ = writeln!(
            s,
            r#"<rect x="{x:.1}" y="{:.1}" width="{len:.1}" height="12" fill="{color}"/><text x="8" y="{:.1}">{} ({v:.3e})</text>"#,
            y,
            y + 10.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}
