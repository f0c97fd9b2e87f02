//! Deterministic SVG rendering of construction traces and curve overlays.
//!
//! Geometry is written in world coordinates inside one transformed group, so
//! sampled curve points can be checked directly against their equations.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::dsl::TraceStep;
use crate::geometry::{Curve, GPoint, Shape};

#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// Output width in pixels; the height follows the viewport's aspect ratio.
    pub width_px: u32,
    /// World rectangle `(xmin, ymin, xmax, ymax)`; `None` fits the content.
    pub viewport: Option<(f64, f64, f64, f64)>,
    /// Minimum curve samples per output pixel of arc length.
    pub samples_per_pixel: f64,
    /// CSS rules keyed by shape class.
    pub styles: Vec<(&'static str, &'static str)>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width_px: 800,
            viewport: None,
            samples_per_pixel: 2.0,
            styles: vec![
                ("point", "fill:#1f3b73;stroke:none"),
                ("segment", "stroke:#1f3b73;stroke-width:2;fill:none"),
                ("line", "stroke:#7a869a;stroke-width:1;stroke-dasharray:6 4;fill:none"),
                ("circle", "stroke:#7a869a;stroke-width:1;fill:none"),
                ("arc", "stroke:#b8572f;stroke-width:1.5;fill:none"),
                ("perpendicular", "stroke:#2f8a57;stroke-width:2;fill:none"),
                ("curve-sample", "fill:#b8572f;stroke:none"),
                ("curve", "stroke:#8e3fb3;stroke-width:1.5;fill:none"),
                ("limit-point", "fill:#ffffff;stroke:#8e3fb3;stroke-width:1.5"),
            ],
        }
    }
}

/// A sampled curve in world coordinates.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub curve: Curve,
    pub points: Vec<(f64, f64)>,
}

/// Unit quadratrix `x = y·cot(πy/2)` for `y ∈ (0, 1]`.
fn quadratrix_at(u: f64) -> (f64, f64) {
    let y = u;
    let x = if y == 1.0 { 0.0 } else { y / (PI * y / 2.0).tan() };
    (x, y)
}

/// Spiral `r = (2/π)θ` (quarter-turn radius 1) for `θ = π·u`, `u ∈ (0, 1]`.
fn spiral_at(u: f64) -> (f64, f64) {
    let theta = PI * u;
    let r = 2.0 * u;
    (r * theta.cos(), r * theta.sin())
}

fn curve_fn(c: Curve) -> fn(f64) -> (f64, f64) {
    match c {
        Curve::Quadratrix => quadratrix_at,
        Curve::Spiral => spiral_at,
    }
}

/// Sample `curve` on the parameter range `(0, 1]` so that consecutive points
/// are at most `1 / samples_per_pixel` pixels apart at scale `px_per_unit`.
pub fn sample_curve(curve: Curve, px_per_unit: f64, samples_per_pixel: f64) -> Polyline {
    let f = curve_fn(curve);
    const PROBE: usize = 4096;
    let lo = 1.0 / PROBE as f64;
    let mut max_step: f64 = 0.0;
    let mut prev = f(lo);
    for i in 1..=PROBE {
        let u = lo + (1.0 - lo) * i as f64 / PROBE as f64;
        let p = f(u);
        max_step = max_step.max(((p.0 - prev.0).powi(2) + (p.1 - prev.1).powi(2)).sqrt());
        prev = p;
    }
    // segment length scales as 1/n; keep it below 1/samples_per_pixel pixels
    // with a margin for curvature between probes
    let n = ((1.1 * max_step * px_per_unit * samples_per_pixel * PROBE as f64).ceil() as usize).max(16);
    let points = (1..=n).map(|i| f(i as f64 / n as f64)).collect();
    Polyline { curve, points }
}

fn num(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn pt(p: &GPoint) -> (f64, f64) {
    p.to_f64()
}

struct Bounds {
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
}

impl Bounds {
    fn new() -> Self {
        Bounds { xmin: f64::INFINITY, ymin: f64::INFINITY, xmax: f64::NEG_INFINITY, ymax: f64::NEG_INFINITY }
    }
    fn add(&mut self, (x, y): (f64, f64)) {
        if x.is_finite() && y.is_finite() {
            self.xmin = self.xmin.min(x);
            self.xmax = self.xmax.max(x);
            self.ymin = self.ymin.min(y);
            self.ymax = self.ymax.max(y);
        }
    }
    fn add_disc(&mut self, (x, y): (f64, f64), r: f64) {
        self.add((x - r, y - r));
        self.add((x + r, y + r));
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn shape_bounds(b: &mut Bounds, s: &Shape) {
    match s {
        Shape::Point(p) => b.add(pt(p)),
        Shape::Segment(p, q) | Shape::Line(p, q) | Shape::Perpendicular { foot: p, top: q } => {
            b.add(pt(p));
            b.add(pt(q));
        }
        Shape::Circle { center, through } => b.add_disc(pt(center), dist(pt(center), pt(through))),
        Shape::Arc { center, from, to } => {
            b.add_disc(pt(center), dist(pt(center), pt(from)));
            b.add(pt(to));
        }
        Shape::CurveSample { point, .. } => b.add(pt(point)),
    }
}

fn shape_svg(out: &mut String, s: &Shape, marker: f64, reach: f64) {
    let cls = s.class();
    match s {
        Shape::Point(p) | Shape::CurveSample { point: p, .. } => {
            let (x, y) = pt(p);
            let _ = writeln!(out, r#"    <circle class="{cls}" cx="{}" cy="{}" r="{}"/>"#, num(x), num(y), num(marker));
        }
        Shape::Segment(p, q) | Shape::Perpendicular { foot: p, top: q } => {
            let ((x1, y1), (x2, y2)) = (pt(p), pt(q));
            let _ = writeln!(
                out,
                r#"    <line class="{cls}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                num(x1),
                num(y1),
                num(x2),
                num(y2)
            );
        }
        Shape::Line(p, q) => {
            let ((x1, y1), (x2, y2)) = (pt(p), pt(q));
            let len = dist((x1, y1), (x2, y2)).max(f64::MIN_POSITIVE);
            let (dx, dy) = ((x2 - x1) / len * reach, (y2 - y1) / len * reach);
            let _ = writeln!(
                out,
                r#"    <line class="{cls}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                num(x1 - dx),
                num(y1 - dy),
                num(x1 + dx),
                num(y1 + dy)
            );
        }
        Shape::Circle { center, through } => {
            let c = pt(center);
            let _ = writeln!(
                out,
                r#"    <circle class="{cls}" cx="{}" cy="{}" r="{}"/>"#,
                num(c.0),
                num(c.1),
                num(dist(c, pt(through)))
            );
        }
        Shape::Arc { center, from, to } => {
            let (c, f, t) = (pt(center), pt(from), pt(to));
            let r = dist(c, f);
            let a0 = (f.1 - c.1).atan2(f.0 - c.0);
            let a1 = (t.1 - c.1).atan2(t.0 - c.0);
            let sweep = (a1 - a0).rem_euclid(2.0 * PI);
            let large = u8::from(sweep > PI);
            // counter-clockwise in world coordinates is the positive-angle direction
            let _ = writeln!(
                out,
                r#"    <path class="{cls}" d="M {} {} A {} {} 0 {large} 1 {} {}"/>"#,
                num(f.0),
                num(f.1),
                num(r),
                num(r),
                num(t.0),
                num(t.1)
            );
        }
    }
}

/// Render a trace, optionally overlaid with a curve, as an SVG 1.1 document.
pub fn render_svg(trace: &[TraceStep], curve: Option<Curve>, spec: &RenderSpec) -> String {
    let mut b = Bounds::new();
    for step in trace {
        for s in &step.shapes {
            shape_bounds(&mut b, s);
        }
    }
    if curve.is_some() {
        b.add((0.0, 0.0));
        b.add((1.0, 1.0));
        if curve == Some(Curve::Spiral) {
            b.add((-2.0, 0.0));
        }
    }
    if !b.xmin.is_finite() {
        b = Bounds { xmin: -1.0, ymin: -1.0, xmax: 1.0, ymax: 1.0 };
    }
    let (xmin, ymin, xmax, ymax) = spec.viewport.unwrap_or_else(|| {
        let w = (b.xmax - b.xmin).max(1e-9);
        let h = (b.ymax - b.ymin).max(1e-9);
        let m = 0.08 * w.max(h);
        (b.xmin - m, b.ymin - m, b.xmax + m, b.ymax + m)
    });
    let (ww, wh) = (xmax - xmin, ymax - ymin);
    let scale = spec.width_px as f64 / ww;
    let height_px = (wh * scale).round().max(1.0) as u32;
    let marker = 3.0 / scale;
    let reach = 2.0 * (ww * ww + wh * wh).sqrt();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{height_px}" viewBox="0 0 {} {height_px}">"#,
        spec.width_px, spec.width_px
    );
    let _ = writeln!(out, "  <style>");
    for (cls, css) in &spec.styles {
        let _ = writeln!(out, "    .{cls} {{ {css}; vector-effect: non-scaling-stroke }}");
    }
    let _ = writeln!(out, "  </style>");
    let _ = writeln!(out, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"  <g id="world" transform="matrix({} 0 0 {} {} {})">"#,
        num(scale),
        num(-scale),
        num(-xmin * scale),
        num(ymax * scale)
    );
    if let Some(c) = curve {
        let poly = sample_curve(c, scale, spec.samples_per_pixel);
        let name = match c {
            Curve::Quadratrix => "quadratrix",
            Curve::Spiral => "spiral",
        };
        let pts: Vec<String> = poly.points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
        let _ = writeln!(out, r#"   <g id="curve-{name}">"#);
        let _ = writeln!(out, r#"    <polyline class="curve" data-samples="{}" points="{}"/>"#, pts.len(), pts.join(" "));
        if c == Curve::Quadratrix {
            // the terminal point is a limit, not a point of the curve
            let _ = writeln!(
                out,
                r#"    <circle class="limit-point" cx="{}" cy="0" r="{}"/>"#,
                num(2.0 / PI),
                num(marker * 1.5)
            );
        }
        let _ = writeln!(out, "   </g>");
    }
    for step in trace {
        let _ = writeln!(out, r#"   <g id="step-{}" class="tool-{}">"#, step.name, step.tool.name());
        for s in &step.shapes {
            shape_svg(&mut out, s, marker, reach);
        }
        let _ = writeln!(out, "   </g>");
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::compile_source;
    use crate::ir::Session;

    fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end]
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn meanprop_drawing_has_arc_segments_and_perpendicular() {
        let s = Session::new();
        let (_, c) = compile_source(&s, "let a = seg(2); let b = seg(8); let m = meanprop(a, b); emit m;").unwrap();
        let svg = render_svg(&c.trace, None, &RenderSpec::default());
        let group = &svg[svg.find("id=\"step-m\"").unwrap()..];
        let group = &group[..group.find("</g>").unwrap()];
        assert_eq!(group.matches("class=\"arc\"").count(), 1);
        assert_eq!(group.matches("class=\"segment\"").count(), 2);
        assert_eq!(group.matches("class=\"perpendicular\"").count(), 1);
        assert_eq!(svg, render_svg(&c.trace, None, &RenderSpec::default()));
    }

    #[test]
    fn quadratrix_samples_satisfy_the_curve_equation() {
        let spec = RenderSpec::default();
        let svg = render_svg(&[], Some(Curve::Quadratrix), &spec);
        let pts = polyline_points(&svg);
        // at y = 1 the tangent is singular; the point (0, 1) satisfies x = y·cot(πy/2)
        for (x, y) in pts.iter().filter(|p| p.1 < 1.0) {
            let lhs = x * (PI * y / 2.0).tan();
            assert!((lhs - y).abs() < 1e-6, "({x}, {y})");
        }
        // spacing in pixels never exceeds half a pixel
        let scale = 800.0 / (1.0 + 2.0 * 0.08);
        for w in pts.windows(2) {
            assert!(dist(w[0], w[1]) * scale <= 0.5 + 1e-9);
        }
    }

    #[test]
    fn spiral_overlay_is_sampled_densely() {
        let p = sample_curve(Curve::Spiral, 400.0, 2.0);
        for w in p.points.windows(2) {
            assert!(dist(w[0], w[1]) * 400.0 <= 0.5 + 1e-9);
        }
        let (x, y) = *p.points.last().unwrap();
        assert!((x + 2.0).abs() < 1e-12 && y.abs() < 1e-12);
    }
}
