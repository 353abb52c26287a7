//! Static SVG diagram of a canonical polygon: the unit circle, numbered
//! vertices and arrowed edges in vertex order.

use std::fmt::Write as _;

use crate::angles::CanonicalPolygon;

const SIZE: f64 = 400.0;
const SCALE: f64 = 160.0;

fn px(x: f64, y: f64) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * x, SIZE / 2.0 - SCALE * y)
}

/// Optional overlay: one edge and two vertices drawn in red, e.g. a
/// non-convexity witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Highlight {
    pub edge: usize,
    pub vertices: [usize; 2],
}

pub fn render(poly: &CanonicalPolygon, caption: Option<&str>, highlight: Option<Highlight>) -> String {
    let n = poly.len();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}" font-family="sans-serif" font-size="12">"#
    );
    s.push_str(
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>"#,
    );
    s.push('\n');
    let (cx, cy) = px(0.0, 0.0);
    let _ = writeln!(
        s,
        r##"<circle cx="{cx}" cy="{cy}" r="{SCALE}" fill="none" stroke="#bbb"/>"##
    );

    for i in 0..n {
        let (a, b) = (poly.vertex(i), poly.vertex((i + 1) % n));
        let (x1, y1) = px(a.x(), a.y());
        let (x2, y2) = px(b.x(), b.y());
        // stop short of the vertex dot so the arrow head stays visible
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = dx.hypot(dy).max(1e-9);
        let shrink = (5.0 / len).min(0.45);
        let (x2, y2) = (x2 - dx * shrink, y2 - dy * shrink);
        let colour = match highlight {
            Some(h) if h.edge == i => "#d22",
            _ => "#246",
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{colour}" stroke-width="1.5" marker-end="url(#arrow)"/>"#
        );
    }
    for (i, v) in poly.vertices().iter().enumerate() {
        let (x, y) = px(v.x(), v.y());
        let fill = match highlight {
            Some(h) if h.vertices.contains(&i) => "#d22",
            _ => "#000",
        };
        let (lx, ly) = px(v.x() * 1.12, v.y() * 1.12);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{fill}"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" dominant-baseline="middle">{i}</text>"#
        );
    }
    if let Some(text) = caption {
        let _ = writeln!(s, r#"<text x="8" y="{}">{}</text>"#, SIZE - 8.0, escape(text));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
