use std::collections::{BTreeMap, HashMap};

use super::{Behavior, Direction, ElementFilter};
use crate::diagnostics::{Code, Diagnostic};
use crate::scene::{PaletteColor, Role, Shape, VisualScene};

/// Fixed-size bit set over element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn empty(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::empty(len);
        for i in idx {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn and(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    fn or(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn not(&self) -> Bits {
        let mut out = Bits::empty(self.len);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o = !w;
        }
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|i| self.words[i / 64] & (1 << (i % 64)) != 0)
    }
}

/// Precomputed lookup tables for filter evaluation.
#[derive(Debug, Clone)]
pub struct SceneIndex {
    len: usize,
    ids: Vec<String>,
    marks: Bits,
    by_value: HashMap<(String, String), Bits>,
    /// Column → (value, element) sorted by value.
    numeric: HashMap<String, Vec<(f64, usize)>>,
    by_color: HashMap<PaletteColor, Bits>,
    by_shape: HashMap<Shape, Bits>,
    by_role: HashMap<Role, Bits>,
    /// Per direction: (order → elements holding that rank).
    ranks: HashMap<Direction, BTreeMap<u32, Bits>>,
    /// Largest rank per direction across shapes.
    max_rank: u32,
    texts: Vec<Option<String>>,
}

impl SceneIndex {
    pub fn new(scene: &VisualScene) -> Self {
        let len = scene.elements.len();
        let mut by_value: HashMap<(String, String), Bits> = HashMap::new();
        let mut numeric: HashMap<String, Vec<(f64, usize)>> = HashMap::new();
        let mut by_color: HashMap<PaletteColor, Bits> = HashMap::new();
        let mut by_shape: HashMap<Shape, Bits> = HashMap::new();
        let mut by_role: HashMap<Role, Bits> = HashMap::new();
        let mut texts = Vec::with_capacity(len);
        for (i, e) in scene.elements.iter().enumerate() {
            for (column, value) in &e.data {
                by_value
                    .entry((column.clone(), value.match_key()))
                    .or_insert_with(|| Bits::empty(len))
                    .insert(i);
                if let Some(n) = value.as_number() {
                    numeric.entry(column.clone()).or_default().push((n, i));
                }
            }
            by_color.entry(e.color.term).or_insert_with(|| Bits::empty(len)).insert(i);
            by_shape.entry(e.shape).or_insert_with(|| Bits::empty(len)).insert(i);
            by_role.entry(e.role).or_insert_with(|| Bits::empty(len)).insert(i);
            texts.push(e.text.as_ref().map(|t| t.to_lowercase()));
        }
        for list in numeric.values_mut() {
            list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        let marks = by_role.get(&Role::Mark).cloned().unwrap_or_else(|| Bits::empty(len));

        let mut ranks: HashMap<Direction, BTreeMap<u32, Bits>> = HashMap::new();
        let mut max_rank = 0;
        let mut per_shape: BTreeMap<Shape, Vec<usize>> = BTreeMap::new();
        for i in marks.iter() {
            per_shape.entry(scene.elements[i].shape).or_default().push(i);
        }
        for direction in [Direction::Left, Direction::Right, Direction::Top, Direction::Bottom] {
            let table = ranks.entry(direction).or_default();
            for members in per_shape.values() {
                let mut sorted = members.clone();
                sorted.sort_by(|&a, &b| {
                    let key = |i: usize| {
                        let (x, y) = scene.elements[i].center();
                        match direction {
                            Direction::Left => x,
                            Direction::Right => -x,
                            Direction::Top => y,
                            Direction::Bottom => -y,
                        }
                    };
                    key(a).total_cmp(&key(b)).then(a.cmp(&b))
                });
                for (rank, i) in sorted.into_iter().enumerate() {
                    let order = rank as u32 + 1;
                    max_rank = max_rank.max(order);
                    table.entry(order).or_insert_with(|| Bits::empty(len)).insert(i);
                }
            }
        }

        Self {
            len,
            ids: scene.elements.iter().map(|e| e.id.clone()).collect(),
            marks,
            by_value,
            numeric,
            by_color,
            by_shape,
            by_role,
            ranks,
            max_rank,
            texts,
        }
    }

    fn lookup<K: std::hash::Hash + Eq>(&self, map: &HashMap<K, Bits>, key: &K) -> Bits {
        map.get(key).cloned().unwrap_or_else(|| Bits::empty(self.len))
    }

    fn matching(&self, filter: &ElementFilter) -> Bits {
        match filter {
            ElementFilter::DataEqual { column, values } => {
                let mut out = Bits::empty(self.len);
                for v in values {
                    if let Some(b) = self.by_value.get(&(column.clone(), v.match_key())) {
                        out.or(b);
                    }
                }
                out
            }
            ElementFilter::DataRange {
                column,
                lo,
                hi,
                strict,
            } => {
                let Some(list) = self.numeric.get(column) else {
                    return Bits::empty(self.len);
                };
                let from = match lo {
                    Some(lo) if *strict => list.partition_point(|(v, _)| v <= lo),
                    Some(lo) => list.partition_point(|(v, _)| v < lo),
                    None => 0,
                };
                let to = match hi {
                    Some(hi) if *strict => list.partition_point(|(v, _)| v < hi),
                    Some(hi) => list.partition_point(|(v, _)| v <= hi),
                    None => list.len(),
                };
                Bits::from_indices(self.len, list[from..to.max(from)].iter().map(|(_, i)| *i))
            }
            ElementFilter::Color { term } => self.lookup(&self.by_color, term),
            ElementFilter::Shape { shape } => self.lookup(&self.by_shape, shape),
            ElementFilter::RoleIs { role } => self.lookup(&self.by_role, role),
            ElementFilter::Position { direction, order } => self
                .ranks
                .get(direction)
                .and_then(|t| t.get(order))
                .cloned()
                .unwrap_or_else(|| Bits::empty(self.len)),
            ElementFilter::TextMatch { substring } => {
                let needle = substring.to_lowercase();
                Bits::from_indices(
                    self.len,
                    self.texts
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| t.as_deref().is_some_and(|t| t.contains(&needle)))
                        .map(|(i, _)| i),
                )
            }
            ElementFilter::Negation { inner } => self.matching(inner).not(),
            ElementFilter::AnyOf { filters } => {
                let mut out = Bits::empty(self.len);
                for f in filters {
                    out.or(&self.matching(f));
                }
                out
            }
            ElementFilter::All => self.marks.clone(),
        }
    }

    /// Element indices (document order) matching every filter.
    pub fn evaluate(&self, filters: &[ElementFilter]) -> Evaluation {
        let mut diagnostics = Vec::new();
        let mut current = if filters.is_empty() {
            self.marks.clone()
        } else {
            Bits::full(self.len)
        };
        let mut reported = false;
        for f in filters {
            if let ElementFilter::Position { order, .. } = f {
                if *order > self.max_rank {
                    diagnostics.push(Diagnostic::warning(
                        Code::PositionOutOfRange,
                        format!(
                            "position {order} requested but no shape has more than {} marks",
                            self.max_rank
                        ),
                    ));
                }
            }
            let before_empty = current.is_empty();
            current.and(&self.matching(f));
            if current.is_empty() && !before_empty && !reported {
                reported = true;
                diagnostics.push(Diagnostic::error(
                    Code::EmptyTargetSet,
                    format!("no element is left after filter `{f}`"),
                ));
            }
        }
        if current.is_empty() && !reported {
            diagnostics.push(Diagnostic::error(
                Code::EmptyTargetSet,
                "the chart has no elements to target",
            ));
        }
        let indices: Vec<usize> = current.iter().collect();
        Evaluation {
            targets: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            indices,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Element ids in document order.
    pub targets: Vec<String>,
    pub indices: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Intersection of every filter's match set; an empty list means all marks.
pub fn evaluate_filters(filters: &[ElementFilter], scene: &VisualScene) -> Evaluation {
    SceneIndex::new(scene).evaluate(filters)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    /// Element and group ids, ordered by first document position.
    pub targets: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Drops scaffolding from emphasis and exit targets and replaces fully
/// targeted groups with the group id.
pub fn refine_grouping(
    targets: &[String],
    scene: &VisualScene,
    behavior: Behavior,
    filters: &[ElementFilter],
) -> Refined {
    let mut diagnostics = Vec::new();
    let position: HashMap<&str, usize> = scene
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str(), i))
        .collect();
    let named_role = |role: Role| {
        filters
            .iter()
            .any(|f| matches!(f, ElementFilter::RoleIs { role: r } if *r == role))
    };

    let mut kept: Vec<&str> = Vec::new();
    let mut dropped = Vec::new();
    for id in targets {
        let Some(&i) = position.get(id.as_str()) else {
            continue;
        };
        let role = scene.elements[i].role;
        let scaffolding = matches!(role, Role::Gridline | Role::Background);
        if scaffolding && matches!(behavior, Behavior::Emphasis | Behavior::Exit) && !named_role(role) {
            dropped.push(id.clone());
        } else if !kept.contains(&id.as_str()) {
            kept.push(id);
        }
    }
    if !dropped.is_empty() {
        diagnostics.push(Diagnostic::note(
            Code::TargetDropped,
            format!("gridline or background elements left out: {}", dropped.join(", ")),
        ));
    }

    let remaining: std::collections::HashSet<&str> = kept.iter().copied().collect();
    let mut covered: std::collections::HashSet<&str> = std::collections::HashSet::new();
    let mut groups: Vec<_> = scene.groups.iter().collect();
    groups.sort_by_key(|g| {
        let first = g.members.first().and_then(|m| position.get(m.as_str())).copied();
        (std::cmp::Reverse(g.members.len()), first)
    });
    let mut out: Vec<(usize, String)> = Vec::new();
    for g in groups {
        let complete = !g.members.is_empty()
            && g.members
                .iter()
                .all(|m| remaining.contains(m.as_str()) && !covered.contains(m.as_str()));
        if complete {
            for m in &g.members {
                covered.insert(m.as_str());
            }
            let first = position[g.members[0].as_str()];
            out.push((first, g.id.clone()));
            diagnostics.push(Diagnostic::note(
                Code::GroupCollapsed,
                format!("all {} members of `{}` targeted; animating the group", g.members.len(), g.id),
            ));
        }
    }
    for id in kept {
        if !covered.contains(id) {
            out.push((position[id], id.to_owned()));
        }
    }
    out.sort();
    Refined {
        targets: out.into_iter().map(|(_, id)| id).collect(),
        diagnostics,
    }
}
