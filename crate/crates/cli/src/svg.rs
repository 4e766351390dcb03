//! Heat map of center-test residuals.

use std::fmt::Write as _;

use projmetric::{CenterReport64, ConvexBody64};

use crate::num::fmt;

const SIZE: f64 = 480.0;
const PAD: f64 = 20.0;

/// Blue for tiny residuals through red for residuals near one, on a log
/// scale; centers get a black outline. The body boundary is drawn in grey.
pub fn heat_map(body: &ConvexBody64, reports: &[CenterReport64], grid: usize) -> String {
    let (lo, hi) = body.bounding_box();
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let scale = (SIZE - 2.0 * PAD) / span;
    let sx = |x: f64| PAD + (x - lo.x) * scale;
    let sy = |y: f64| SIZE - PAD - (y - lo.y) * scale;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    let outline: Vec<String> =
        body.boundary_points(256).iter().map(|p| format!("{},{}", fmt(sx(p.x)), fmt(sy(p.y)))).collect();
    writeln!(out, r##"<polygon points="{}" fill="none" stroke="#888" stroke-width="1"/>"##, outline.join(" ")).unwrap();

    let radius = 0.4 * (SIZE - 2.0 * PAD) / grid.max(2) as f64;
    for r in reports {
        let level = ((r.fit_residual.max(1e-16).log10() + 16.0) / 16.0).clamp(0.0, 1.0);
        let (red, blue) = ((255.0 * level).round() as u8, (255.0 * (1.0 - level)).round() as u8);
        let stroke = if r.is_projective_center { r#" stroke="black" stroke-width="2""# } else { "" };
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="rgb({red},64,{blue})"{stroke}><title>residual {}</title></circle>"#,
            fmt(sx(r.point.x)),
            fmt(sy(r.point.y)),
            fmt(radius),
            fmt(r.fit_residual)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
