//! SVG rendering in the style of the usual cut-cell figures: positively cut
//! triangles shaded gray, positive edges dashed, the curve solid.

use std::fmt::Write as _;

use crate::classify::CutClassification;
use crate::curve::BoundaryCurve;
use crate::geom::Vec2;
use crate::mesh::Triangulation;
use crate::param::ParamSample;
use crate::topology::PositiveLoop;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Output width in pixels; the height follows the mesh aspect ratio.
    pub width: f64,
    pub mesh_stroke: f64,
    pub edge_stroke: f64,
    pub curve_stroke: f64,
    pub mesh_color: String,
    pub cut_fill: String,
    pub edge_color: String,
    pub curve_color: String,
    pub whisker_color: String,
    pub shade_cut: bool,
    /// Draw `x → π(x)` for every sample.
    pub whiskers: bool,
    /// Polyline points per curve component.
    pub curve_points: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800.0,
            mesh_stroke: 0.5,
            edge_stroke: 2.0,
            curve_stroke: 1.5,
            mesh_color: "#b0b0b0".into(),
            cut_fill: "#d0d0d0".into(),
            edge_color: "#000000".into(),
            curve_color: "#1f4e9c".into(),
            whisker_color: "#c0392b".into(),
            shade_cut: true,
            whiskers: false,
            curve_points: 512,
        }
    }
}

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn map(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }
}

fn pt(f: &Frame, p: Vec2) -> String {
    let (x, y) = f.map(p);
    format!("{x:.3},{y:.3}")
}

/// Renders the mesh and whatever of the analysis is supplied.
///
/// Positive edges come from `loops` when given, otherwise from the
/// classification.
pub fn render_svg(
    tri: &Triangulation,
    curve: Option<&BoundaryCurve>,
    cls: Option<&CutClassification>,
    loops: &[PositiveLoop],
    samples: &[Vec<ParamSample>],
    opts: &RenderOptions,
) -> String {
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for v in tri.vertices() {
        lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let span = (hi.x - lo.x).max(f64::MIN_POSITIVE);
    let f = Frame {
        x0: lo.x,
        y1: hi.y,
        scale: opts.width / span,
    };
    let height = (hi.y - lo.y) * f.scale;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.3}" height="{:.3}" viewBox="0 0 {:.3} {:.3}">"#,
        opts.width, height, opts.width, height
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    if let (true, Some(cls)) = (opts.shade_cut, cls) {
        writeln!(s, r#"<g fill="{}" stroke="none">"#, opts.cut_fill).unwrap();
        for c in &cls.cut_triangles {
            let t = tri.triangle(c.triangle);
            writeln!(
                s,
                r#"<polygon points="{} {} {}"/>"#,
                pt(&f, tri.vertex(t[0])),
                pt(&f, tri.vertex(t[1])),
                pt(&f, tri.vertex(t[2]))
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }

    writeln!(s, r#"<g stroke="{}" stroke-width="{}" fill="none">"#, opts.mesh_color, opts.mesh_stroke).unwrap();
    for (&(a, b), _) in tri.edges() {
        line(&mut s, &f, tri.vertex(a), tri.vertex(b));
    }
    writeln!(s, "</g>").unwrap();

    if let Some(curve) = curve {
        writeln!(s, r#"<g stroke="{}" stroke-width="{}" fill="none">"#, opts.curve_color, opts.curve_stroke).unwrap();
        for id in 0..curve.num_components() {
            let pts: Vec<String> = curve.polyline(id, opts.curve_points).into_iter().map(|p| pt(&f, p)).collect();
            writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" ")).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }

    let dash = 3.0 * opts.edge_stroke;
    writeln!(
        s,
        r#"<g stroke="{}" stroke-width="{}" stroke-dasharray="{} {}" fill="none">"#,
        opts.edge_color, opts.edge_stroke, dash, dash
    )
    .unwrap();
    if loops.is_empty() {
        if let Some(cls) = cls {
            for e in &cls.positive_edges {
                line(&mut s, &f, tri.vertex(e.edge.0), tri.vertex(e.edge.1));
            }
        }
    } else {
        for lp in loops {
            let pts: Vec<String> = lp.vertex_cycle.iter().map(|&v| pt(&f, tri.vertex(v))).collect();
            writeln!(s, r#"<polygon data-loop="{}" points="{}"/>"#, lp.loop_id, pts.join(" ")).unwrap();
        }
    }
    writeln!(s, "</g>").unwrap();

    if opts.whiskers && !samples.is_empty() {
        writeln!(s, r#"<g stroke="{}" stroke-width="{}">"#, opts.whisker_color, 0.5 * opts.mesh_stroke).unwrap();
        for p in samples.iter().flatten() {
            line(&mut s, &f, p.x, p.pi_x.position);
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}

fn line(s: &mut String, f: &Frame, a: Vec2, b: Vec2) {
    let (x1, y1) = f.map(a);
    let (x2, y2) = f.map(b);
    writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#).unwrap();
}
