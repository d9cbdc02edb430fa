//! SVG drawing of a 2-dimensional unit ball and its dual ball.

use std::fmt::Write;

use polypar::{Error, PolyhedralSpace, Result, Vector};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 90.0;
const INSET: f64 = 180.0;

fn angle(v: &[f64]) -> f64 {
    v[1].atan2(v[0])
}

fn sorted_by_angle(points: Vec<Vector>) -> Vec<(Vector, [f64; 2])> {
    let mut out: Vec<(Vector, [f64; 2])> = points
        .into_iter()
        .map(|p| {
            let f = p.to_f64();
            (p, [f[0], f[1]])
        })
        .collect();
    out.sort_by(|a, b| angle(&a.1).total_cmp(&angle(&b.1)));
    out
}

fn extent(points: &[(Vector, [f64; 2])]) -> f64 {
    points
        .iter()
        .flat_map(|(_, p)| [p[0].abs(), p[1].abs()])
        .fold(0.0, f64::max)
}

fn polygon(svg: &mut String, points: &[[f64; 2]], style: &str) {
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", p[0], p[1]))
        .collect();
    writeln!(svg, r#"  <polygon points="{}" {style}/>"#, coords.join(" ")).unwrap();
}

fn text(svg: &mut String, at: [f64; 2], size: u32, anchor: &str, body: &str) {
    writeln!(
        svg,
        r#"  <text x="{:.2}" y="{:.2}" font-size="{size}" text-anchor="{anchor}" font-family="monospace">{}</text>"#,
        at[0],
        at[1],
        escape(body)
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders the primal unit ball with vertex and facet labels, and the dual
/// ball as a scaled inset in the top-left corner.
pub fn render_svg(space: &PolyhedralSpace) -> Result<String> {
    if space.dim() != 2 {
        return Err(Error::UnsupportedDimension(space.dim()));
    }
    let primal = sorted_by_angle(space.primal_vertices().to_vec());
    let scale = (SIZE / 2.0 - MARGIN) / extent(&primal);
    let centre = SIZE / 2.0;
    let map = |p: [f64; 2]| [centre + scale * p[0], centre - scale * p[1]];

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        svg,
        "  <title>unit ball of {}</title>",
        escape(space.name())
    )
    .unwrap();
    writeln!(
        svg,
        r##"  <rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    )
    .unwrap();
    writeln!(
        svg,
        r##"  <line x1="{MARGIN}" y1="{centre}" x2="{}" y2="{centre}" stroke="#cccccc"/>"##,
        SIZE - MARGIN
    )
    .unwrap();
    writeln!(
        svg,
        r##"  <line x1="{centre}" y1="{MARGIN}" x2="{centre}" y2="{}" stroke="#cccccc"/>"##,
        SIZE - MARGIN
    )
    .unwrap();

    let ball: Vec<[f64; 2]> = primal.iter().map(|(_, p)| map(*p)).collect();
    polygon(
        &mut svg,
        &ball,
        r##"fill="#dbe8f6" stroke="#1f4e79" stroke-width="2""##,
    );

    for (v, p) in &primal {
        let at = map(*p);
        writeln!(
            svg,
            r##"  <circle cx="{:.2}" cy="{:.2}" r="4" fill="#1f4e79"/>"##,
            at[0], at[1]
        )
        .unwrap();
        let push = 1.0 + 18.0 / (p[0].hypot(p[1]) * scale);
        let label = map([p[0] * push, p[1] * push]);
        text(
            &mut svg,
            [label[0], label[1] + 4.0],
            13,
            "middle",
            &format!("({v})"),
        );
    }

    for f in space.signed_duals() {
        let facet = space.facet(f);
        let mid = Vector::mean(&facet.vertex_set).to_f64();
        let inner = map([mid[0] * 0.82, mid[1] * 0.82]);
        text(
            &mut svg,
            [inner[0], inner[1] + 4.0],
            11,
            "middle",
            &format!("[{}]", space.functional(f)),
        );
    }

    let dual_points: Vec<Vector> = space.signed_duals().map(|f| space.functional(f)).collect();
    let dual = sorted_by_angle(dual_points);
    let dual_scale = (INSET / 2.0 - 16.0) / extent(&dual);
    let origin = [16.0 + INSET / 2.0, 16.0 + INSET / 2.0];
    writeln!(
        svg,
        r##"  <rect x="16" y="16" width="{INSET}" height="{INSET}" fill="none" stroke="#999999"/>"##
    )
    .unwrap();
    let inset: Vec<[f64; 2]> = dual
        .iter()
        .map(|(_, p)| [origin[0] + dual_scale * p[0], origin[1] - dual_scale * p[1]])
        .collect();
    polygon(
        &mut svg,
        &inset,
        r##"fill="#f6e3d0" stroke="#8a4b08" stroke-width="1.5""##,
    );
    text(
        &mut svg,
        [origin[0], 16.0 + INSET + 16.0],
        12,
        "middle",
        "dual ball",
    );
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}
