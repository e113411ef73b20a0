//! Brute-force filter semantics over randomized scenes.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use reelscript_core::interpret::{Direction, ElementFilter, SceneIndex};
use reelscript_core::scene::{
    BBox, Canvas, ColorTerm, DataValue, Paint, PaletteColor, Role, Shape, VisualElement, VisualScene,
};

const PALETTE: [PaletteColor; 12] = [
    PaletteColor::Red,
    PaletteColor::Orange,
    PaletteColor::Yellow,
    PaletteColor::Green,
    PaletteColor::Teal,
    PaletteColor::Blue,
    PaletteColor::Purple,
    PaletteColor::Pink,
    PaletteColor::Brown,
    PaletteColor::Gray,
    PaletteColor::Black,
    PaletteColor::White,
];
const COUNTRIES: [&str; 6] = ["USA", "usa", "China", "Japan", " Japan", "Côte d'Ivoire"];
const TEXTS: [&str; 5] = ["USA", "2005 peak", "Japan grew", "Total", "usa?"];
const NEEDLES: [&str; 6] = ["usa", "2005", "JAPAN", "", "t", "zzz"];
const DIRECTIONS: [Direction; 4] = [Direction::Left, Direction::Right, Direction::Top, Direction::Bottom];

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items[rng.random_range(0..items.len())]
}

fn random_value(rng: &mut ChaCha8Rng, column: &str) -> DataValue {
    match column {
        "Year" => match rng.random_range(0..3) {
            0 => DataValue::Number(rng.random_range(2000..2012) as f64),
            1 => DataValue::Text(format!("{}", rng.random_range(2000..2012))),
            _ => DataValue::Text(format!(" {}.0", rng.random_range(2000..2012))),
        },
        "Value" => DataValue::Number(rng.random_range(-20..40) as f64 / 4.0),
        _ => DataValue::Text(pick(rng, &COUNTRIES).to_owned()),
    }
}

pub fn random_scene(rng: &mut ChaCha8Rng) -> VisualScene {
    let n = rng.random_range(0..=60);
    let mut elements = Vec::with_capacity(n);
    for i in 0..n {
        let mut data = BTreeMap::new();
        for column in ["Year", "Country", "Value"] {
            if rng.random_bool(0.7) {
                data.insert(column.to_owned(), random_value(rng, column));
            }
        }
        let role = if rng.random_bool(0.6) { Role::Mark } else { pick(rng, &Role::ALL) };
        let text = if rng.random_bool(0.25) {
            Some(pick(rng, &TEXTS).to_owned())
        } else {
            None
        };
        // coarse grid so that centers tie often
        let bbox = BBox {
            x: rng.random_range(0..8) as f64 * 10.0,
            y: rng.random_range(0..8) as f64 * 10.0,
            width: rng.random_range(0..3) as f64 * 5.0,
            height: rng.random_range(0..3) as f64 * 5.0,
        };
        let term = pick(rng, &PALETTE);
        elements.push(VisualElement {
            id: format!("e{i}"),
            tag: "rect".into(),
            shape: pick(rng, &[Shape::Bar, Shape::Line, Shape::Point, Shape::Text, Shape::Other]),
            color: ColorTerm {
                term,
                raw: term.name().to_owned(),
            },
            paint: Paint::Fill,
            rgb: term.anchor(),
            bbox,
            data,
            role,
            group_id: None,
            text,
            source_offset: 0,
        });
    }
    VisualScene {
        elements,
        groups: Vec::new(),
        columns: BTreeMap::new(),
        canvas: Canvas {
            width: 100.0,
            height: 100.0,
        },
        svg_source: String::new(),
    }
}

pub fn random_filter(rng: &mut ChaCha8Rng, depth: u32) -> ElementFilter {
    let kinds = if depth == 0 { 8 } else { 10 };
    match rng.random_range(0..kinds) {
        0 => {
            let column = pick(rng, &["Year", "Country", "Value", "Missing"]);
            let count = rng.random_range(1..=3);
            ElementFilter::DataEqual {
                column: column.to_owned(),
                values: (0..count)
                    .map(|_| {
                        let from = pick(rng, &["Year", "Country", "Value"]);
                        random_value(rng, from)
                    })
                    .collect(),
            }
        }
        1 => {
            let column = pick(rng, &["Year", "Value", "Country"]);
            let bound = |rng: &mut ChaCha8Rng| -> Option<f64> {
                if rng.random_bool(0.25) {
                    None
                } else if column == "Year" {
                    Some(rng.random_range(1999..2013) as f64)
                } else {
                    Some(rng.random_range(-24..44) as f64 / 4.0)
                }
            };
            let mut lo = bound(rng);
            let hi = bound(rng);
            if lo.is_none() && hi.is_none() {
                lo = Some(0.0);
            }
            ElementFilter::DataRange {
                column: column.to_owned(),
                lo,
                hi,
                strict: rng.random_bool(0.3),
            }
        }
        2 => ElementFilter::Color {
            term: pick(rng, &PALETTE),
        },
        3 => ElementFilter::Shape {
            shape: pick(rng, &Shape::ALL),
        },
        4 => ElementFilter::Position {
            direction: pick(rng, &DIRECTIONS),
            order: rng.random_range(1..=12),
        },
        5 => ElementFilter::RoleIs {
            role: pick(rng, &Role::ALL),
        },
        6 => ElementFilter::TextMatch {
            substring: pick(rng, &NEEDLES).to_owned(),
        },
        7 => ElementFilter::All,
        8 => ElementFilter::negate(random_filter(rng, depth - 1)),
        _ => ElementFilter::AnyOf {
            filters: (0..rng.random_range(1..=3)).map(|_| random_filter(rng, depth - 1)).collect(),
        },
    }
}

fn same_value(a: &DataValue, b: &DataValue) -> bool {
    let num = |v: &DataValue| match v {
        DataValue::Number(n) => Some(*n),
        DataValue::Text(s) => s.trim().parse::<f64>().ok().filter(|n| n.is_finite()),
    };
    match (num(a), num(b)) {
        (Some(x), Some(y)) => x == y,
        _ => {
            let text = |v: &DataValue| match v {
                DataValue::Number(n) => n.to_string(),
                DataValue::Text(s) => s.trim().to_lowercase(),
            };
            text(a) == text(b)
        }
    }
}

fn number_of(v: &DataValue) -> Option<f64> {
    match v {
        DataValue::Number(n) => Some(*n),
        DataValue::Text(s) => s.trim().parse::<f64>().ok().filter(|n| n.is_finite()),
    }
}

/// Rank of mark `i` among the marks of its shape along `direction`,
/// counting marks that come strictly before it.
fn rank(scene: &VisualScene, i: usize, direction: Direction) -> u32 {
    let key = |e: &VisualElement| {
        let cx = e.bbox.x + e.bbox.width / 2.0;
        let cy = e.bbox.y + e.bbox.height / 2.0;
        match direction {
            Direction::Left => cx,
            Direction::Right => -cx,
            Direction::Top => cy,
            Direction::Bottom => -cy,
        }
    };
    let me = &scene.elements[i];
    let mine = key(me);
    let before = scene
        .elements
        .iter()
        .enumerate()
        .filter(|(j, e)| {
            e.role == Role::Mark
                && e.shape == me.shape
                && (key(e) < mine || (key(e) == mine && *j < i))
        })
        .count();
    before as u32 + 1
}

pub fn brute_matches(f: &ElementFilter, scene: &VisualScene, i: usize) -> bool {
    let e = &scene.elements[i];
    match f {
        ElementFilter::DataEqual { column, values } => e
            .data
            .get(column)
            .is_some_and(|v| values.iter().any(|w| same_value(v, w))),
        ElementFilter::DataRange { column, lo, hi, strict } => {
            let Some(v) = e.data.get(column).and_then(number_of) else {
                return false;
            };
            let above = lo.is_none_or(|lo| if *strict { v > lo } else { v >= lo });
            let below = hi.is_none_or(|hi| if *strict { v < hi } else { v <= hi });
            above && below
        }
        ElementFilter::Color { term } => e.color.term == *term,
        ElementFilter::Shape { shape } => e.shape == *shape,
        ElementFilter::Position { direction, order } => {
            e.role == Role::Mark && rank(scene, i, *direction) == *order
        }
        ElementFilter::RoleIs { role } => e.role == *role,
        ElementFilter::TextMatch { substring } => e
            .text
            .as_ref()
            .is_some_and(|t| t.to_lowercase().contains(&substring.to_lowercase())),
        ElementFilter::Negation { inner } => !brute_matches(inner, scene, i),
        ElementFilter::AnyOf { filters } => filters.iter().any(|g| brute_matches(g, scene, i)),
        ElementFilter::All => e.role == Role::Mark,
    }
}

pub fn brute_evaluate(filters: &[ElementFilter], scene: &VisualScene) -> Vec<usize> {
    (0..scene.elements.len())
        .filter(|&i| {
            if filters.is_empty() {
                scene.elements[i].role == Role::Mark
            } else {
                filters.iter().all(|f| brute_matches(f, scene, i))
            }
        })
        .collect()
}

#[derive(Debug, Default)]
pub struct OracleReport {
    pub scenes: usize,
    pub conjunctions: usize,
    pub mismatches: Vec<String>,
}

/// Indexed evaluation against the brute force, plus negation disjointness
/// and cover for every first conjunct.
pub fn run_filter_oracle(seed: u64, scenes: usize, conjunctions: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    for s in 0..scenes {
        let scene = random_scene(&mut rng);
        let index = SceneIndex::new(&scene);
        report.scenes += 1;
        for c in 0..conjunctions {
            let len = rng.random_range(0..=4);
            let filters: Vec<ElementFilter> = (0..len).map(|_| random_filter(&mut rng, 2)).collect();
            report.conjunctions += 1;
            let indexed = index.evaluate(&filters).indices;
            let brute = brute_evaluate(&filters, &scene);
            if indexed != brute {
                report.mismatches.push(format!(
                    "scene {s} conjunction {c}: indexed {indexed:?} brute {brute:?} for {filters:?}"
                ));
            }
            if let Some(f) = filters.first() {
                let yes = index.evaluate(std::slice::from_ref(f)).indices;
                let no = index.evaluate(&[ElementFilter::negate(f.clone())]).indices;
                let disjoint = yes.iter().all(|i| !no.contains(i));
                let cover = yes.len() + no.len() == scene.elements.len();
                if !(disjoint && cover) {
                    report.mismatches.push(format!(
                        "scene {s} conjunction {c}: negation of {f:?} is not the complement"
                    ));
                }
            }
        }
    }
    report
}
