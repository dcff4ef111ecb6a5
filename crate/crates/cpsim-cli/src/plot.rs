//! Self-contained SVG line plots plus gnuplot-compatible `.dat` twins.
//!
//! The SVG is hand-assembled (no external tooling): fixed canvas, linear
//! axes with five ticks per side, one polyline with point markers per
//! series, and a legend. Every plot is also written as a `.dat` file with
//! one `# name` commented block per series (blank-line separated, so
//! gnuplot's `index` selects a series) for consumption by any stack.

use std::fmt::Write as _;

/// One named series of (x, y) points.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 6] = ["#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910", "#2c3e50"];
const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 62.0; // margins: left, right, top, bottom
const MR: f64 = 18.0;
const MT: f64 = 34.0;
const MB: f64 = 46.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 100.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

/// Render an SVG line plot of the series. Degenerate ranges are padded so
/// single-point or constant series still render.
pub fn svg_line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1) = pts().map(|p| p.0).fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = pts().map(|p| p.1).fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if !(x0 <= x1) {
        (x0, x1) = (0.0, 1.0);
    }
    if !(y0 <= y1) {
        (y0, y1) = (0.0, 1.0);
    }
    if x0 == x1 {
        (x0, x1) = (x0 - 0.5, x1 + 0.5);
    }
    if y0 == y1 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let sx = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        xml_escape(title)
    );
    // Axes.
    let _ = writeln!(
        s,
        r#"<path d="M {ML} {MT} L {ML} {yb} L {xr} {yb}" stroke="black" fill="none"/>"#,
        yb = H - MB,
        xr = W - MR
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let px = sx(fx);
        let py = sy(fy);
        let _ = writeln!(s, r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="black"/>"#, H - MB, H - MB + 4.0);
        let _ = writeln!(
            s,
            r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#,
            H - MB + 17.0,
            fmt_tick(fx)
        );
        let _ = writeln!(s, r#"<line x1="{}" y1="{py}" x2="{ML}" y2="{py}" stroke="black"/>"#, ML - 4.0);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            ML - 7.0,
            py + 4.0,
            fmt_tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (ML + W - MR) / 2.0,
        H - 8.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        xml_escape(y_label)
    );
    // Series.
    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        if ser.points.len() > 1 {
            let path: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = MT + 14.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, W - MR - 150.0, W - MR - 130.0);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            W - MR - 125.0,
            ly + 4.0,
            xml_escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Gnuplot-compatible dump: one commented block per series, blank-line
/// separated so `index` addresses them.
pub fn dat_dump(series: &[Series]) -> String {
    let mut s = String::new();
    for (k, ser) in series.iter().enumerate() {
        if k > 0 {
            s.push_str("\n\n");
        }
        let _ = writeln!(s, "# {}", ser.name);
        for &(x, y) in &ser.points {
            let _ = writeln!(s, "{x} {y}");
        }
    }
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
