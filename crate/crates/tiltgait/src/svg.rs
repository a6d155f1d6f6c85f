//! Static SVG of singular-attitude contours over the roll-pitch square.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use tiltgait_core::ContourSet;

const SIZE: f64 = 600.0;
const PAD: f64 = 40.0;
/// Stroke colour per contour set, in order: first gait red, second blue.
const COLORS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

fn px(v: f64) -> String {
    format!("{:.2}", v)
}

fn to_x(phi: f64) -> f64 {
    PAD + (phi + FRAC_PI_2) / std::f64::consts::PI * SIZE
}

/// Theta grows upwards.
fn to_y(theta: f64) -> f64 {
    PAD + (FRAC_PI_2 - theta) / std::f64::consts::PI * SIZE
}

/// Roll on the horizontal axis, pitch on the vertical, axes through the
/// origin, one path per polyline.
pub fn render(sets: &[&ContourSet]) -> String {
    let full = SIZE + 2.0 * PAD;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#,
        w = full
    );
    let _ = writeln!(
        out,
        r#"<rect x="{p}" y="{p}" width="{s}" height="{s}" fill="white" stroke="black"/>"#,
        p = PAD,
        s = SIZE
    );
    let (ox, oy) = (to_x(0.0), to_y(0.0));
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888"/>"##,
        px(PAD),
        px(oy),
        px(PAD + SIZE),
        px(oy)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888"/>"##,
        px(ox),
        px(PAD),
        px(ox),
        px(PAD + SIZE)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="end">phi</text>"#,
        px(PAD + SIZE - 4.0),
        px(oy - 6.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14">theta</text>"#,
        px(ox + 6.0),
        px(PAD + 14.0)
    );
    for (k, c) in sets.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let name = c.gait.as_deref().unwrap_or("");
        let _ = writeln!(
            out,
            r#"<g id="set{k}" fill="none" stroke="{color}" stroke-width="1.5">"#
        );
        let _ = writeln!(out, "<title>{}</title>", escape(name));
        for line in c.polylines.iter().filter(|l| !l.points.is_empty()) {
            let mut d = String::new();
            for (i, p) in line.points.iter().enumerate() {
                let _ = write!(
                    d,
                    "{}{},{}",
                    if i == 0 { "M" } else { " L" },
                    px(to_x(p.phi)),
                    px(to_y(p.theta))
                );
            }
            let _ = writeln!(out, r#"<path d="{d}"/>"#);
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="14" fill="{color}">{}</text>"#,
            px(PAD),
            px(PAD - 8.0 - 16.0 * (k % 2) as f64),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
