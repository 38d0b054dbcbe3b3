use std::fmt::Write;

use rayon::prelude::*;

use super::config::GridConfig;
use crate::soliton::{u_field, Precision, SolitonData, SolitonError, Times};

/// u(x, y) on a regular grid at fixed t3; `values[iy][ix]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub t: f64,
    pub values: Vec<Vec<f64>>,
}

fn axis(range: [f64; 2], count: usize) -> Vec<f64> {
    let step = (range[1] - range[0]) / (count - 1) as f64;
    (0..count).map(|i| range[0] + step * i as f64).collect()
}

/// Rows are evaluated in parallel; the result does not depend on scheduling.
pub fn soliton_grid(sd: &SolitonData, grid: &GridConfig, prec: Precision) -> Result<FieldGrid, SolitonError> {
    let xs = axis(grid.x, grid.nx);
    let ys = axis(grid.y, grid.ny);
    let values = ys
        .par_iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| {
                    let t = Times::xyt(x, y, grid.t);
                    match prec {
                        Precision::Double => u_field::<f64>(sd, &t),
                        Precision::DoubleDouble => u_field::<twofloat::TwoFloat>(sd, &t),
                    }
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FieldGrid { xs, ys, t: grid.t, values })
}

pub fn grid_csv(g: &FieldGrid) -> String {
    let mut s = String::from("x,y,u\n");
    for (y, row) in g.ys.iter().zip(&g.values) {
        for (x, u) in g.xs.iter().zip(row) {
            let _ = writeln!(s, "{x:.17e},{y:.17e},{u:.17e}");
        }
    }
    s
}

/// Piecewise-linear blue to yellow ramp on [0, 1].
fn color(v: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let v = v.clamp(0.0, 1.0);
    let i = STOPS.iter().rposition(|(p, _)| *p <= v).unwrap_or(0).min(STOPS.len() - 2);
    let (p0, c0) = STOPS[i];
    let (p1, c1) = STOPS[i + 1];
    let s = (v - p0) / (p1 - p0);
    let mix = |a: f64, b: f64| (a + s * (b - a)).round() as u8;
    (mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2]))
}

/// Heatmap with y increasing upwards.
pub fn heatmap_svg(g: &FieldGrid, title: &str) -> String {
    let (nx, ny) = (g.xs.len(), g.ys.len());
    let cell = (480.0 / nx.max(ny) as f64).max(1.0);
    let (margin, top) = (50.0, 40.0);
    let (w, h) = (nx as f64 * cell + 2.0 * margin, ny as f64 * cell + top + margin);
    let (lo, hi) = g
        .values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{margin}" y="24" font-size="14">{title} (t = {})</text>"#, g.t);
    for (iy, row) in g.values.iter().enumerate() {
        let y = top + (ny - 1 - iy) as f64 * cell;
        for (ix, &v) in row.iter().enumerate() {
            let (r, gr, b) = color((v - lo) / span);
            let x = margin + ix as f64 * cell;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{c:.2}" height="{c:.2}" fill="rgb({r},{gr},{b})"/>"#,
                c = cell + 0.05
            );
        }
    }
    let base = top + ny as f64 * cell + 16.0;
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="{base:.0}" font-size="11">x in [{}, {}], y in [{}, {}], u in [{lo:.4}, {hi:.4}]</text>"#,
        g.xs[0],
        g.xs[nx - 1],
        g.ys[0],
        g.ys[ny - 1]
    );
    s.push_str("</svg>\n");
    s
}
