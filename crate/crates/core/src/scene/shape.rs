use super::geometry::{has_baseline, Outline};
use super::{Role, Shape};
use crate::diagnostics::{Code, Diagnostic};

/// Largest radius still classified as a point mark.
const POINT_MAX_RADIUS: f64 = 20.0;
/// Axis-role lines shorter than this are tick marks.
const TICK_MAX_LENGTH: f64 = 12.0;

/// What classification looks at: tag, local outline, paint and role.
#[derive(Debug, Clone)]
pub struct ShapeInput<'a> {
    pub tag: &'a str,
    pub role: Role,
    pub filled: bool,
    pub stroked: bool,
    pub(crate) outline: Outline,
    /// Radius for circles, largest radius for ellipses.
    pub radius: Option<f64>,
}

impl<'a> ShapeInput<'a> {
    pub fn new(tag: &'a str, role: Role, filled: bool, stroked: bool) -> Self {
        Self {
            tag,
            role,
            filled,
            stroked,
            outline: Outline::default(),
            radius: None,
        }
    }

    pub fn with_path(mut self, d: &str) -> Self {
        self.outline = super::geometry::path_outline(d);
        self
    }

    pub fn with_points(mut self, points: &str, closed: bool) -> Self {
        self.outline = super::geometry::points_outline(points, closed);
        self
    }

    pub fn with_segment(mut self, a: (f64, f64), b: (f64, f64)) -> Self {
        self.outline = Outline {
            vertices: vec![a, b],
            hull: vec![a, b],
            closed: false,
            has_arc: false,
            segments: 1,
        };
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }
}

fn degenerate(tag: &str) -> (Shape, Option<Diagnostic>) {
    (
        Shape::Other,
        Some(Diagnostic::warning(
            Code::UnclassifiableShape,
            format!("<{tag}> has degenerate geometry"),
        )),
    )
}

pub fn classify_shape(input: &ShapeInput<'_>) -> (Shape, Option<Diagnostic>) {
    let outline = &input.outline;
    match input.tag {
        "text" => (Shape::Text, None),
        "rect" => {
            if input.role == Role::Mark {
                (Shape::Bar, None)
            } else {
                (Shape::Other, None)
            }
        }
        "circle" | "ellipse" => match input.radius {
            Some(r) if r <= 0.0 || !r.is_finite() => degenerate(input.tag),
            Some(r) if r <= POINT_MAX_RADIUS => (Shape::Point, None),
            _ => (Shape::Other, None),
        },
        "line" => {
            let (a, b) = match outline.vertices.as_slice() {
                [a, b, ..] => (*a, *b),
                _ => return degenerate("line"),
            };
            let length = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            if length <= 0.0 {
                return degenerate("line");
            }
            let shape = match input.role {
                Role::Mark => Shape::Tick,
                Role::Axis if length < TICK_MAX_LENGTH => Shape::Tick,
                _ => Shape::AxisLine,
            };
            (shape, None)
        }
        "path" | "polyline" | "polygon" => {
            let bbox = super::BBox::from_points(&outline.hull);
            if outline.segments == 0 || bbox.is_degenerate() {
                return degenerate(input.tag);
            }
            if input.role == Role::Axis || input.role == Role::Gridline {
                return (Shape::AxisLine, None);
            }
            let filled_shape = || {
                if outline.has_arc {
                    Shape::PieSlice
                } else if has_baseline(&outline.vertices) {
                    Shape::Area
                } else {
                    Shape::Polygon
                }
            };
            if outline.closed && input.filled {
                (filled_shape(), None)
            } else if input.stroked {
                (Shape::Line, None)
            } else if input.filled {
                (filled_shape(), None)
            } else {
                (
                    Shape::Other,
                    Some(Diagnostic::warning(
                        Code::UnclassifiableShape,
                        format!("<{}> is neither filled nor stroked", input.tag),
                    )),
                )
            }
        }
        other => (
            Shape::Other,
            Some(Diagnostic::warning(
                Code::UnclassifiableShape,
                format!("no shape rule for <{other}>"),
            )),
        ),
    }
}
