//! SVG pictures of polygon documents in the Poincaré disc.

use std::fmt::Write as _;

use crate::center::{make_center, CenterFrame, CenterKind};
use crate::error::{Error, Result};
use crate::lorentz::{boxtimes, Isometry, Vec3L};
use crate::polygon::{develop_from, map_v};
use crate::document::PolygonDocument;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Width and height of the picture in pixels.
    pub size: f64,
    /// Number of translates of the polygon drawn on each side by the holonomy.
    pub copies: usize,
    /// Samples along the equidistant curve.
    pub samples: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 480.0, copies: 1, samples: 240 }
    }
}

struct Canvas {
    c: f64,
    r: f64,
}

impl Canvas {
    /// Disc coordinates to SVG coordinates (y points down in SVG).
    fn xy(&self, p: (f64, f64)) -> (f64, f64) {
        (self.c + self.r * p.0, self.c - self.r * p.1)
    }
}

fn disc(p: Vec3L) -> (f64, f64) {
    let d = 1.0 + p.x0;
    (p.x1 / d, p.x2 / d)
}

/// Ideal point of a future lightlike vector on the unit circle.
fn ideal(v: Vec3L) -> (f64, f64) {
    (v.x1 / v.x0, v.x2 / v.x0)
}

fn fmt(v: f64) -> String {
    // avoid "-0.000"
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// SVG path of the geodesic segment between two disc points.
fn geodesic_path(cv: &Canvas, a: (f64, f64), b: (f64, f64)) -> String {
    let (ax, ay) = cv.xy(a);
    let (bx, by) = cv.xy(b);
    // center (cx, cy) of the circle through a and b orthogonal to the unit circle
    let det = 2.0 * (a.0 * b.1 - a.1 * b.0);
    let na = a.0 * a.0 + a.1 * a.1 + 1.0;
    let nb = b.0 * b.0 + b.1 * b.1 + 1.0;
    let chord = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
    if det.abs() < 1e-9 * chord.max(1e-12) || chord < 1e-12 {
        return format!("M {} {} L {} {}", fmt(ax), fmt(ay), fmt(bx), fmt(by));
    }
    let cx = (na * b.1 - nb * a.1) / det;
    let cy = (nb * a.0 - na * b.0) / det;
    let rad = (cx * cx + cy * cy - 1.0).max(0.0).sqrt();
    if rad * cv.r > 1e6 {
        return format!("M {} {} L {} {}", fmt(ax), fmt(ay), fmt(bx), fmt(by));
    }
    // counterclockwise about the center in the disc is clockwise on screen
    let cross = (a.0 - cx) * (b.1 - cy) - (a.1 - cy) * (b.0 - cx);
    let sweep = if cross > 0.0 { 1 } else { 0 };
    format!(
        "M {} {} A {} {} 0 0 {} {} {}",
        fmt(ax),
        fmt(ay),
        fmt(rad * cv.r),
        fmt(rad * cv.r),
        sweep,
        fmt(bx),
        fmt(by)
    )
}

fn polyline(cv: &Canvas, pts: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = cv.xy(*p);
        let _ = write!(s, "{}{} {}", if i == 0 { "M " } else { " L " }, fmt(x), fmt(y));
    }
    s
}

/// Point of the line `e` closest to the center.
fn foot(cf: &CenterFrame, e: Vec3L) -> Result<Vec3L> {
    (cf.x0 - e * e.dot(&cf.x0)).normalize_point()
}

fn equidistant_points(cf: &CenterFrame, start: Vec3L, samples: usize) -> Vec<(f64, f64)> {
    let range: Vec<f64> = match cf.kind {
        CenterKind::Cone(_) => (0..=samples).map(|k| std::f64::consts::TAU * k as f64 / samples as f64).collect(),
        // spread samples so that both ends run close to the boundary
        _ => (0..=samples)
            .map(|k| (12.0 * (k as f64 / samples as f64 - 0.5)).sinh())
            .collect(),
    };
    range.into_iter().map(|s| disc(cf.flow(s) * start)).collect()
}

/// Renders a polygon document as an SVG picture.
pub fn render_svg(doc: &PolygonDocument, options: &RenderOptions) -> Result<String> {
    let spec = doc.spec()?;
    let cf = make_center(doc.center)?;
    if !(options.size > 0.0 && options.size.is_finite()) {
        return Err(Error::Domain(format!("picture size {}", options.size)));
    }
    let polygon = develop_from(map_v(&cf, doc.params.l0, doc.params.theta)?, cf.gamma, &doc.params.lengths, &spec)?;
    let cv = Canvas { c: options.size / 2.0, r: options.size / 2.0 - 10.0 };
    let n = polygon.n();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = fmt(options.size)
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black" stroke-width="1"/>"#,
        c = fmt(cv.c),
        r = fmt(cv.r)
    );

    // translates of the polygon
    let inv = cf.gamma.inverse();
    for k in 1..=options.copies {
        for (g, sign) in [(cf.gamma, 1), (inv, -1)] {
            let mut h = Isometry::identity();
            for _ in 0..k {
                h = h * g;
            }
            let mut d = String::new();
            for i in 0..n {
                let a = disc(h * polygon.vertex(i));
                let b = disc(h * polygon.vertex(i + 1));
                let _ = write!(d, "{} ", geodesic_path(&cv, a, b));
            }
            let _ = writeln!(
                out,
                r##"<path class="copy{sign}x{k}" d="{}" fill="none" stroke="#999999" stroke-width="1"/>"##,
                d.trim_end()
            );
        }
    }

    let mut d = String::new();
    for i in 0..n {
        let a = disc(polygon.vertex(i));
        let b = disc(polygon.vertex(i + 1));
        let _ = write!(d, "{} ", geodesic_path(&cv, a, b));
    }
    let _ = writeln!(
        out,
        r##"<path class="polygon" d="{}" fill="none" stroke="#1f4e9a" stroke-width="2"/>"##,
        d.trim_end()
    );
    for i in 0..n {
        let (x, y) = cv.xy(disc(polygon.vertex(i)));
        let _ = writeln!(out, r##"<circle class="vertex" cx="{}" cy="{}" r="2.5" fill="#1f4e9a"/>"##, fmt(x), fmt(y));
    }

    // equidistant through the tangency point of the first edge; for a
    // non-optimal polygon this is the equidistant of that edge only
    if let Ok(t) = foot(&cf, polygon.edge_lines[0]) {
        let pts = equidistant_points(&cf, t, options.samples.max(8));
        let _ = writeln!(
            out,
            r##"<path class="equidistant" d="{}" fill="none" stroke="#c0392b" stroke-width="1" stroke-dasharray="4 3"/>"##,
            polyline(&cv, &pts)
        );
    }

    // the center
    match cf.kind {
        CenterKind::Cone(_) => {
            let (x, y) = cv.xy(disc(cf.x0));
            let _ = writeln!(out, r##"<circle class="center" cx="{}" cy="{}" r="4" fill="#c0392b"/>"##, fmt(x), fmt(y));
        }
        CenterKind::Cusp => {
            let (x, y) = cv.xy(ideal(cf.x0));
            let _ = writeln!(out, r##"<circle class="center" cx="{}" cy="{}" r="4" fill="#c0392b"/>"##, fmt(x), fmt(y));
        }
        CenterKind::Geodesic(_) => {
            // ideal endpoints p ± t of the core, with p its point closest to p0
            let p = (cf.p0 - cf.x0 * cf.x0.dot(&cf.p0)).normalize_point()?;
            let t = boxtimes(cf.x0, p);
            let _ = writeln!(
                out,
                r##"<path class="center" d="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
                geodesic_path(&cv, ideal(p + t), ideal(p - t))
            );
        }
    }

    let zero: Vec<String> = doc
        .params
        .lengths
        .iter()
        .enumerate()
        .filter(|(_, l)| **l <= 0.0)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if !zero.is_empty() {
        let _ = writeln!(
            out,
            r##"<text class="warning" x="8" y="18" font-family="monospace" font-size="12" fill="#c0392b">warning: zero-length edge {}</text>"##,
            zero.join(", ")
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="8" y="{}" font-family="monospace" font-size="12">{} n={} perimeter={:.9} spread={:.2e}</text>"#,
        fmt(options.size - 8.0),
        cf.kind.name(),
        n,
        doc.perimeter,
        doc.certificates.tangency_spread
    );
    out.push_str("</svg>\n");
    Ok(out)
}
