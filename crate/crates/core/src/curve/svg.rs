use std::f64::consts::PI;
use std::fmt::Write;

use super::CurveModel;

/// Schematic picture: Γ0 in the middle, the other components on a ring,
/// each marked point on its circle, gluings as dashed chords.
pub fn curve_svg(curve: &CurveModel) -> String {
    let m = curve.components.len().max(2) - 1;
    let (w, h) = (720.0, 720.0);
    let (cx, cy) = (w / 2.0, h / 2.0);
    let ring = 270.0;
    let r_small = (PI * ring / m as f64 * 0.6).clamp(12.0, 50.0);
    let centres: Vec<(f64, f64, f64)> = curve
        .components
        .iter()
        .enumerate()
        .map(|(i, _)| {
            if i == 0 {
                (cx, cy, 120.0)
            } else {
                let a = 2.0 * PI * (i - 1) as f64 / m as f64 - PI / 2.0;
                (cx + ring * a.cos(), cy + ring * a.sin(), r_small)
            }
        })
        .collect();
    let point_pos = |c: usize, p: usize| -> (f64, f64) {
        let (x, y, r) = centres[c];
        let count = curve.components[c].points.len() as f64;
        let a = 2.0 * PI * p as f64 / count - PI / 2.0;
        (x + r * a.cos(), y + r * a.sin())
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for g in &curve.gluings {
        let (x1, y1) = point_pos(g.a.0, g.a.1);
        let (x2, y2) = point_pos(g.b.0, g.b.1);
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="gray" stroke-dasharray="4 3"/>"#
        );
    }
    for (c, comp) in curve.components.iter().enumerate() {
        let (x, y, r) = centres[c];
        let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="{r:.1}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-size="12" text-anchor="middle">{}</text>"#,
            comp.label
        );
        for (p, pt) in comp.points.iter().enumerate() {
            let (px, py) = point_pos(c, p);
            let fill = if pt.darboux { "red" } else { "black" };
            let _ = writeln!(s, r#"<circle cx="{px:.1}" cy="{py:.1}" r="3" fill="{fill}"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}
