//! Natural-language command interpretation.
//!
//! A command becomes a [`CommandIR`]: behavior, optional effect, a
//! conjunction of [`ElementFilter`]s and properties. Filters are evaluated
//! against a [`VisualScene`](crate::scene::VisualScene) to obtain concrete
//! targets.

mod adapter;
mod evaluate;
mod lexicon;
mod rules;

pub use adapter::{
    adapter_by_name, adapter_result, AdapterRequest, ColumnSummary, InterpreterAdapter,
    RuleBasedAdapter, SceneSummary, SubprocessAdapter,
};
pub use evaluate::{evaluate_filters, refine_grouping, Evaluation, Refined, SceneIndex};
pub use lexicon::ordinal_value;
pub use rules::interpret;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostics::Diagnostic;
use crate::scene::{DataValue, PaletteColor, Role, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Entrance,
    Emphasis,
    Exit,
    Opening,
}

impl Behavior {
    pub const ALL: [Behavior; 4] = [
        Behavior::Entrance,
        Behavior::Emphasis,
        Behavior::Exit,
        Behavior::Opening,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Behavior::Entrance => "entrance",
            Behavior::Emphasis => "emphasis",
            Behavior::Exit => "exit",
            Behavior::Opening => "opening",
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
    Top,
    Bottom,
}

impl Direction {
    pub fn from_word(word: &str) -> Option<Direction> {
        Some(match word {
            "left" => Direction::Left,
            "right" => Direction::Right,
            "top" | "above" => Direction::Top,
            "bottom" | "below" => Direction::Bottom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stagger {
    Together,
    OneByOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Easing {
    #[default]
    Linear,
    EaseInOut,
}

/// A predicate over scene elements. A list of filters is a conjunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ElementFilter {
    /// The element's value in `column` equals one of `values`.
    DataEqual {
        column: String,
        values: Vec<DataValue>,
    },
    /// Numeric bounds over a quantitative or temporal column. Bounds are
    /// inclusive unless `strict`.
    DataRange {
        column: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
        #[serde(default, skip_serializing_if = "is_false")]
        strict: bool,
    },
    Color {
        term: PaletteColor,
    },
    Shape {
        shape: Shape,
    },
    /// The element is the `order`-th mark of its shape along `direction`.
    Position {
        direction: Direction,
        order: u32,
    },
    RoleIs {
        role: Role,
    },
    TextMatch {
        substring: String,
    },
    Negation {
        inner: Box<ElementFilter>,
    },
    /// Disjunction; used to negate several context entities at once.
    AnyOf {
        filters: Vec<ElementFilter>,
    },
    /// Every mark-role element.
    All,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl ElementFilter {
    pub fn negate(inner: ElementFilter) -> ElementFilter {
        ElementFilter::Negation {
            inner: Box::new(inner),
        }
    }

    /// Checks the variant invariants: ranges have a bound, orders start at 1.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ElementFilter::DataRange { lo, hi, .. } => lo.is_some() || hi.is_some(),
            ElementFilter::Position { order, .. } => *order >= 1,
            ElementFilter::DataEqual { values, .. } => !values.is_empty(),
            ElementFilter::Negation { inner } => inner.is_well_formed(),
            ElementFilter::AnyOf { filters } => filters.iter().all(|f| f.is_well_formed()),
            _ => true,
        }
    }

    /// True for filters that scope a negation (shape, role, all).
    pub fn is_scope(&self) -> bool {
        matches!(
            self,
            ElementFilter::Shape { .. } | ElementFilter::RoleIs { .. } | ElementFilter::All
        )
    }
}

impl fmt::Display for ElementFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementFilter::DataEqual { column, values } => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "{column} = {}", vs.join(" | "))
            }
            ElementFilter::DataRange {
                column,
                lo,
                hi,
                strict,
            } => {
                let op = if *strict { "<" } else { "<=" };
                match (lo, hi) {
                    (Some(lo), Some(hi)) => write!(f, "{lo} {op} {column} {op} {hi}"),
                    (Some(lo), None) => write!(f, "{column} {} {lo}", if *strict { ">" } else { ">=" }),
                    (None, Some(hi)) => write!(f, "{column} {op} {hi}"),
                    (None, None) => write!(f, "{column} in any range"),
                }
            }
            ElementFilter::Color { term } => write!(f, "color {}", term.name()),
            ElementFilter::Shape { shape } => {
                write!(f, "shape {}", serde_json::to_value(shape).unwrap().as_str().unwrap_or("?"))
            }
            ElementFilter::Position { direction, order } => {
                write!(f, "position {order} from {direction:?}")
            }
            ElementFilter::RoleIs { role } => {
                write!(f, "role {}", serde_json::to_value(role).unwrap().as_str().unwrap_or("?"))
            }
            ElementFilter::TextMatch { substring } => write!(f, "text ~ `{substring}`"),
            ElementFilter::Negation { inner } => write!(f, "not ({inner})"),
            ElementFilter::AnyOf { filters } => {
                let parts: Vec<String> = filters.iter().map(|x| x.to_string()).collect();
                write!(f, "any of ({})", parts.join(", "))
            }
            ElementFilter::All => f.write_str("all marks"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Properties {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<PaletteColor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stagger: Option<Stagger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub easing: Option<Easing>,
    /// Free-form extras kept for round-tripping.
    #[serde(default, flatten)]
    pub custom: BTreeMap<String, serde_json::Value>,
}

impl Properties {
    pub fn is_empty(&self) -> bool {
        self.color.is_none()
            && self.direction.is_none()
            && self.stagger.is_none()
            && self.easing.is_none()
            && self.custom.is_empty()
    }

    /// Fields set in `self` win over `base`.
    pub fn overlay(&self, base: &Properties) -> Properties {
        let mut custom = base.custom.clone();
        custom.extend(self.custom.clone());
        Properties {
            color: self.color.or(base.color),
            direction: self.direction.or(base.direction),
            stagger: self.stagger.or(base.stagger),
            easing: self.easing.or(base.easing),
            custom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandIR {
    pub behavior: Behavior,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect: Option<String>,
    pub filters: Vec<ElementFilter>,
    #[serde(default, skip_serializing_if = "Properties::is_empty")]
    pub properties: Properties,
    #[serde(default, skip_serializing_if = "is_false")]
    pub reuse_previous: bool,
}

impl CommandIR {
    pub fn new(behavior: Behavior) -> Self {
        Self {
            behavior,
            effect: None,
            filters: Vec::new(),
            properties: Properties::default(),
            reuse_previous: false,
        }
    }
}

/// Interpreter output: the IR plus anything worth telling the author.
/// Diagnostic spans are character offsets into the utterance.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub ir: CommandIR,
    pub diagnostics: Vec<Diagnostic>,
}
