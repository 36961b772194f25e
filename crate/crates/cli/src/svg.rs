//! Minimal SVG writer for nested quadrilaterals in the square chart.

use std::fmt::Write;

const PALETTE: [&str; 8] = ["#1b1b1b", "#2c5d8f", "#3a8f6a", "#b07d2b", "#a23b3b", "#6b4c9a", "#3b8ea2", "#8a8a2c"];

pub struct Quad {
    pub depth: usize,
    pub corners: [(f64, f64); 4],
}

/// Renders the chart square `[-1, 1]^2` with `w` pointing up. Deeper quads
/// get thinner strokes and a faint fill.
pub fn render(quads: &[Quad], notes: &[String]) -> String {
    let size = 800.0;
    let pad = 0.05;
    let scale = size / (2.0 + 2.0 * pad);
    let px = |(u, w): (f64, f64)| ((u + 1.0 + pad) * scale, (1.0 + pad - w) * scale);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{h}" viewBox="0 0 {size} {h}">"#,
        h = size + 20.0 * notes.len() as f64
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for q in quads {
        let pts: Vec<String> = q.corners.iter().map(|&c| px(c)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let color = PALETTE[q.depth % PALETTE.len()];
        let width = (1.6 / (1.0 + q.depth as f64 * 0.5)).max(0.2);
        writeln!(
            s,
            r#"<polygon data-depth="{}" points="{}" fill="{color}" fill-opacity="0.06" stroke="{color}" stroke-width="{width:.3}"/>"#,
            q.depth,
            pts.join(" ")
        )
        .unwrap();
    }
    for (k, n) in notes.iter().enumerate() {
        writeln!(
            s,
            r#"<text x="10" y="{}" font-family="monospace" font-size="14" fill="{}">{}</text>"#,
            size + 15.0 + 20.0 * k as f64,
            PALETTE[4],
            escape(n)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
