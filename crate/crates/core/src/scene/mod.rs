//! Typed view of an SVG chart: every graphical node becomes a
//! [`VisualElement`] carrying its data binding, canonical color, geometry and
//! structural role.
//!
//! Input conventions:
//!
//! * data bindings come from `data-field-<column>="<value>"` attributes;
//! * roles come from a `data-role` attribute or a class token in
//!   `mark axis legend label title gridline annotation background`, inherited
//!   from ancestors; unmarked elements are `mark` when data-bound and
//!   `background` otherwise;
//! * ids come from `id`, else `el-<document order index>`;
//! * a `<g>` with an `id` is a group; an element's `group_id` is its nearest
//!   such ancestor.

mod color;
mod geometry;
mod ingest;
mod shape;

pub use color::{canonical_color, parse_rgb, ColorTerm, PaletteColor};
pub use geometry::BBox;
pub use ingest::{ingest_svg, Ingested};
pub use shape::{classify_shape, ShapeInput};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Bar,
    Line,
    Area,
    Point,
    PieSlice,
    Tick,
    AxisLine,
    Text,
    Polygon,
    Other,
}

impl Shape {
    pub const ALL: [Shape; 10] = [
        Shape::Bar,
        Shape::Line,
        Shape::Area,
        Shape::Point,
        Shape::PieSlice,
        Shape::Tick,
        Shape::AxisLine,
        Shape::Text,
        Shape::Polygon,
        Shape::Other,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Mark,
    Axis,
    Legend,
    Label,
    Title,
    Gridline,
    Annotation,
    Background,
}

impl Role {
    pub const ALL: [Role; 8] = [
        Role::Mark,
        Role::Axis,
        Role::Legend,
        Role::Label,
        Role::Title,
        Role::Gridline,
        Role::Annotation,
        Role::Background,
    ];

    pub fn from_token(token: &str) -> Option<Role> {
        Some(match token {
            "mark" => Role::Mark,
            "axis" => Role::Axis,
            "legend" => Role::Legend,
            "label" => Role::Label,
            "title" => Role::Title,
            "gridline" => Role::Gridline,
            "annotation" => Role::Annotation,
            "background" => Role::Background,
            _ => return None,
        })
    }

    /// Chart scaffolding revealed first by an opening animation.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Role::Axis | Role::Legend | Role::Label | Role::Title | Role::Gridline
        )
    }
}

/// Which paint carries the element's visible color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Paint {
    Fill,
    Stroke,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataValue {
    Number(f64),
    Text(String),
}

impl DataValue {
    pub fn parse(raw: &str) -> DataValue {
        let trimmed = raw.trim();
        match trimmed.parse::<f64>() {
            Ok(n) if n.is_finite() && !trimmed.is_empty() => DataValue::Number(n),
            _ => DataValue::Text(raw.to_owned()),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            DataValue::Number(n) => Some(*n),
            DataValue::Text(s) => s.trim().parse::<f64>().ok().filter(|n| n.is_finite()),
        }
    }

    /// Case-insensitive comparison with numeric coercion.
    pub fn loosely_equals(&self, other: &DataValue) -> bool {
        if let (Some(a), Some(b)) = (self.as_number(), other.as_number()) {
            return a == b;
        }
        self.to_string().trim().to_lowercase() == other.to_string().trim().to_lowercase()
    }

    /// Key used for indexing; equal keys iff `loosely_equals`.
    pub fn match_key(&self) -> String {
        match self.as_number() {
            // -0 and 0 share a key
            Some(0.0) => "#0".to_owned(),
            Some(n) => format!("#{n}"),
            None => self.to_string().trim().to_lowercase(),
        }
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataValue::Number(n) => write!(f, "{n}"),
            DataValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VisualElement {
    pub id: String,
    pub tag: String,
    pub shape: Shape,
    pub color: ColorTerm,
    pub paint: Paint,
    /// Resolved sRGB of the painted color.
    pub rgb: [u8; 3],
    pub bbox: BBox,
    pub data: BTreeMap<String, DataValue>,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    /// Byte offset of the element's start tag in the SVG source.
    #[serde(skip)]
    pub source_offset: usize,
}

// the source offset only locates the element in its original text
impl PartialEq for VisualElement {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.tag == other.tag
            && self.shape == other.shape
            && self.color == other.color
            && self.paint == other.paint
            && self.rgb == other.rgb
            && self.bbox == other.bbox
            && self.data == other.data
            && self.role == other.role
            && self.group_id == other.group_id
            && self.text == other.text
    }
}

impl VisualElement {
    pub fn center(&self) -> (f64, f64) {
        self.bbox.center()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub id: String,
    /// Graphical descendants, document order.
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Categorical,
    Quantitative,
    Temporal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub kind: ColumnKind,
    /// Distinct values in first-appearance order.
    pub domain: Vec<DataValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl Column {
    pub fn is_numeric(&self) -> bool {
        self.kind != ColumnKind::Categorical
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VisualScene {
    pub elements: Vec<VisualElement>,
    pub groups: Vec<Group>,
    pub columns: BTreeMap<String, Column>,
    pub canvas: Canvas,
    #[serde(skip)]
    pub svg_source: String,
}

impl PartialEq for VisualScene {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.groups == other.groups
            && self.columns == other.columns
            && self.canvas == other.canvas
    }
}

impl VisualScene {
    pub fn element(&self, id: &str) -> Option<&VisualElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn group(&self, id: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.id == id)
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.element(id).is_some() || self.group(id).is_some()
    }

    /// Element ids for a target id: the element itself or a group's members.
    pub fn expand(&self, id: &str) -> Vec<String> {
        if self.element(id).is_some() {
            vec![id.to_owned()]
        } else if let Some(group) = self.group(id) {
            group.members.clone()
        } else {
            Vec::new()
        }
    }

    pub fn marks(&self) -> impl Iterator<Item = &VisualElement> {
        self.elements.iter().filter(|e| e.role == Role::Mark)
    }

    /// Canonical JSON (`inspect-svg` output).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }
}
