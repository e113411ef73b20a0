use serde::{Deserialize, Serialize};
use svgtypes::{PathParser, PathSegment, PointsParser, SimplePathSegment, SimplifyingPathParser, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl BBox {
    pub const EMPTY: BBox = BBox {
        x: 0.0,
        y: 0.0,
        width: 0.0,
        height: 0.0,
    };

    pub fn from_points(points: &[(f64, f64)]) -> BBox {
        if points.is_empty() {
            return BBox::EMPTY;
        }
        let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
        let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        BBox {
            x: x0,
            y: y0,
            width: x1 - x0,
            height: y1 - y0,
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.width / 2.0, self.y + self.height / 2.0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.width <= 0.0 && self.height <= 0.0
    }
}

pub(crate) fn apply(ts: &Transform, (x, y): (f64, f64)) -> (f64, f64) {
    (ts.a * x + ts.c * y + ts.e, ts.b * x + ts.d * y + ts.f)
}

pub(crate) fn compose(parent: &Transform, child: &Transform) -> Transform {
    Transform::new(
        parent.a * child.a + parent.c * child.b,
        parent.b * child.a + parent.d * child.b,
        parent.a * child.c + parent.c * child.d,
        parent.b * child.c + parent.d * child.d,
        parent.a * child.e + parent.c * child.f + parent.e,
        parent.b * child.e + parent.d * child.f + parent.f,
    )
}

/// Outline facts used by shape classification, in local coordinates.
#[derive(Debug, Clone, Default)]
pub(crate) struct Outline {
    /// On-curve vertices, in drawing order.
    pub vertices: Vec<(f64, f64)>,
    /// Vertices plus curve control points; bounds the outline.
    pub hull: Vec<(f64, f64)>,
    pub closed: bool,
    pub has_arc: bool,
    pub segments: usize,
}

pub(crate) fn path_outline(d: &str) -> Outline {
    let mut out = Outline::default();
    for seg in PathParser::from(d) {
        match seg {
            Ok(PathSegment::EllipticalArc { .. }) => out.has_arc = true,
            Ok(_) => {}
            Err(_) => break,
        }
    }
    let mut first: Option<(f64, f64)> = None;
    for seg in SimplifyingPathParser::from(d) {
        let Ok(seg) = seg else { break };
        match seg {
            SimplePathSegment::MoveTo { x, y } => {
                first = Some((x, y));
                out.vertices.push((x, y));
                out.hull.push((x, y));
            }
            SimplePathSegment::LineTo { x, y } => {
                out.segments += 1;
                out.vertices.push((x, y));
                out.hull.push((x, y));
            }
            SimplePathSegment::CurveTo {
                x1,
                y1,
                x2,
                y2,
                x,
                y,
            } => {
                out.segments += 1;
                out.vertices.push((x, y));
                out.hull.extend([(x1, y1), (x2, y2), (x, y)]);
            }
            SimplePathSegment::Quadratic { x1, y1, x, y } => {
                out.segments += 1;
                out.vertices.push((x, y));
                out.hull.extend([(x1, y1), (x, y)]);
            }
            SimplePathSegment::ClosePath => {
                out.closed = true;
                if let Some(p) = first {
                    out.vertices.push(p);
                }
            }
        }
    }
    if !out.closed && out.vertices.len() >= 3 && out.vertices.first() == out.vertices.last() {
        out.closed = true;
    }
    out
}

pub(crate) fn points_outline(points: &str, closed: bool) -> Outline {
    let mut vertices: Vec<(f64, f64)> = PointsParser::from(points).collect();
    if closed {
        if let Some(&p) = vertices.first() {
            vertices.push(p);
        }
    }
    Outline {
        hull: vertices.clone(),
        segments: vertices.len().saturating_sub(1),
        closed,
        has_arc: false,
        vertices,
    }
}

/// True when some edge runs horizontally along the outline's lowest y.
pub(crate) fn has_baseline(vertices: &[(f64, f64)]) -> bool {
    const EPS: f64 = 1e-6;
    let bottom = vertices
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    vertices.windows(2).any(|w| {
        let (a, b) = (w[0], w[1]);
        (a.1 - bottom).abs() < EPS && (b.1 - bottom).abs() < EPS && (a.0 - b.0).abs() > EPS
    })
}
