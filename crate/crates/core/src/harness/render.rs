//! SVG drawings of packings.

use std::f64::consts::PI;
use std::fmt::Write;
use std::path::Path;

use super::io::write_text;
use super::HarnessError;
use crate::rigidity::Packing;

/// Vertices of the polygon drawn for each body.
pub const POLYGON_VERTICES: usize = 720;

/// SVG text of a packing: each body as a polygon through its boundary,
/// the contact graph as segments between centres, and a view box fitted
/// to the bodies with a 5% margin. The y axis points up.
pub fn render_svg(packing: &Packing) -> Result<String, HarnessError> {
    let mut boundary = Vec::with_capacity(POLYGON_VERTICES);
    for k in 0..POLYGON_VERTICES {
        let t = 2.0 * PI * k as f64 / POLYGON_VERTICES as f64;
        let f = packing.body.radial_value(t)?;
        boundary.push((f * t.cos(), f * t.sin()));
    }
    let polygons: Vec<Vec<(f64, f64)>> = packing
        .p
        .iter()
        .zip(&packing.r)
        .map(|(c, r)| {
            boundary
                .iter()
                .map(|(x, y)| (c.x + r * x, -(c.y + r * y)))
                .collect()
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in polygons.iter().flatten() {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let margin = 0.05 * (x1 - x0).max(y1 - y0);
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = 0.002 * w.max(h);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="720" height="{}">"#,
        x0 - margin,
        y0 - margin,
        w,
        h,
        (720.0 * h / w).round()
    )
    .unwrap();
    writeln!(
        svg,
        r##"<g fill="#dde8f4" stroke="#1f4e79" stroke-width="{stroke}">"##
    )
    .unwrap();
    for (v, poly) in polygons.iter().enumerate() {
        let points: Vec<String> = poly.iter().map(|(x, y)| format!("{x:.6},{y:.6}")).collect();
        writeln!(
            svg,
            r#"<polygon id="body-{v}" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(
        svg,
        r##"<g stroke="#b22222" stroke-width="{}">"##,
        1.5 * stroke
    )
    .unwrap();
    for (e, &(u, v)) in packing.graph.edges().iter().enumerate() {
        let (a, b) = (packing.p[u], packing.p[v]);
        writeln!(
            svg,
            r#"<line id="edge-{e}" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            a.x, -a.y, b.x, -b.y
        )
        .unwrap();
    }
    writeln!(svg, "</g>\n</svg>").unwrap();
    Ok(svg)
}

pub fn write_svg(path: &Path, packing: &Packing) -> Result<(), HarnessError> {
    write_text(path, &render_svg(packing)?)
}
