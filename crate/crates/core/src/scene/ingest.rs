use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;

use roxmltree::{Document, Node, ParsingOptions};
use svgtypes::{Length, Transform, ViewBox};

use super::geometry::{apply, compose};
use super::{
    canonical_color, classify_shape, parse_rgb, BBox, Canvas, Column, ColumnKind, DataValue,
    Group, Paint, PaletteColor, Role, ShapeInput, VisualElement, VisualScene,
};
use super::color::ColorTerm;
use crate::diagnostics::{Code, Diagnostic, Origin, SourceSpan};

const GRAPHICAL: [&str; 8] = [
    "rect", "circle", "ellipse", "line", "path", "polyline", "polygon", "text",
];

/// Subtrees that never render directly.
const SKIPPED: [&str; 14] = [
    "defs",
    "clipPath",
    "mask",
    "marker",
    "pattern",
    "symbol",
    "linearGradient",
    "radialGradient",
    "filter",
    "style",
    "script",
    "title",
    "desc",
    "metadata",
];

const DEFAULT_FONT_SIZE: f64 = 16.0;
/// Average glyph advance as a fraction of the font size.
const GLYPH_ADVANCE: f64 = 0.6;
const ASCENT: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct Ingested {
    pub scene: VisualScene,
    pub warnings: Vec<Diagnostic>,
}

pub fn ingest_svg(svg_text: &str) -> Result<Ingested, Vec<Diagnostic>> {
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let doc = Document::parse_with_options(svg_text, opts).map_err(|e| {
        let pos = e.pos();
        let offset = char_offset_of_pos(svg_text, pos.row, pos.col);
        vec![Diagnostic::error(Code::MalformedSvg, format!("malformed SVG: {e}"))
            .with_span(SourceSpan::new(offset, offset))
            .with_origin(Origin::Svg)]
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(vec![Diagnostic::error(
            Code::MalformedSvg,
            format!("root element is <{}>, expected <svg>", root.tag_name().name()),
        )
        .with_span(span_of(svg_text, root))
        .with_origin(Origin::Svg)]);
    }

    let mut ctx = Walker {
        src: svg_text,
        warnings: Vec::new(),
        ids: IdAllocator::default(),
        elements: Vec::new(),
        groups: Vec::new(),
        graphical_index: 0,
    };
    let base = Inherited {
        transform: Transform::default(),
        ..Inherited::default()
    };
    ctx.children(root, &base);

    let columns = infer_columns(&ctx.elements);
    let groups = ctx
        .groups
        .into_iter()
        .filter(|g| !g.members.is_empty())
        .collect();
    let scene = VisualScene {
        elements: ctx.elements,
        groups,
        columns,
        canvas: canvas_of(root),
        svg_source: svg_text.to_owned(),
    };
    Ok(Ingested {
        scene,
        warnings: ctx.warnings,
    })
}

/// Presentation state carried down the tree.
#[derive(Clone, Default)]
struct Inherited {
    fill: Option<String>,
    stroke: Option<String>,
    font_size: Option<f64>,
    text_anchor: Option<String>,
    role: Option<Role>,
    transform: Transform,
    data: BTreeMap<String, DataValue>,
    /// Index into `Walker::groups` of the nearest identified `<g>`.
    group: Option<usize>,
    /// Every identified `<g>` on the ancestor chain.
    group_chain: Vec<usize>,
}

#[derive(Default)]
struct IdAllocator {
    used: HashSet<String>,
}

impl IdAllocator {
    fn claim(&mut self, wanted: &str) -> (String, bool) {
        if self.used.insert(wanted.to_owned()) {
            return (wanted.to_owned(), false);
        }
        let mut n = 2;
        loop {
            let candidate = format!("{wanted}-{n}");
            if self.used.insert(candidate.clone()) {
                return (candidate, true);
            }
            n += 1;
        }
    }
}

struct Walker<'s> {
    src: &'s str,
    warnings: Vec<Diagnostic>,
    ids: IdAllocator,
    elements: Vec<VisualElement>,
    groups: Vec<Group>,
    graphical_index: usize,
}

impl<'s> Walker<'s> {
    fn children(&mut self, node: Node<'_, '_>, inherited: &Inherited) {
        for child in node.children().filter(|c| c.is_element()) {
            self.node(child, inherited);
        }
    }

    fn node(&mut self, node: Node<'_, '_>, parent: &Inherited) {
        let name = node.tag_name().name();
        if SKIPPED.contains(&name) {
            return;
        }
        let mut state = parent.clone();
        let own_role = self.inherit(node, &mut state);

        if GRAPHICAL.contains(&name) {
            self.graphical(node, name, &state);
            // text content is folded into the text element itself
            return;
        }
        if name == "g" {
            if let Some(raw_id) = node.attribute("id") {
                let id = self.claim_id(node, raw_id);
                self.groups.push(Group {
                    id,
                    members: Vec::new(),
                    role: own_role,
                });
                let slot = self.groups.len() - 1;
                state.group = Some(slot);
                state.group_chain.push(slot);
            }
        }
        self.children(node, &state);
    }

    fn claim_id(&mut self, node: Node<'_, '_>, wanted: &str) -> String {
        let (id, renamed) = self.ids.claim(wanted);
        if renamed {
            self.warnings.push(
                Diagnostic::warning(
                    Code::DuplicateElementId,
                    format!("duplicate id `{wanted}` renamed to `{id}`"),
                )
                .with_span(span_of(self.src, node))
                .with_origin(Origin::Svg),
            );
        }
        id
    }

    fn inherit(&mut self, node: Node<'_, '_>, state: &mut Inherited) -> Option<Role> {
        if let Some(v) = presentation(node, "fill") {
            state.fill = Some(v);
        }
        if let Some(v) = presentation(node, "stroke") {
            state.stroke = Some(v);
        }
        if let Some(v) = presentation(node, "font-size").and_then(|v| length(&v)) {
            state.font_size = Some(v);
        }
        if let Some(v) = presentation(node, "text-anchor") {
            state.text_anchor = Some(v);
        }
        let own_role = self.own_role(node);
        if own_role.is_some() {
            state.role = own_role;
        }
        if let Some(ts) = node
            .attribute("transform")
            .and_then(|t| Transform::from_str(t).ok())
        {
            state.transform = compose(&state.transform, &ts);
        }
        for attr in node.attributes() {
            if let Some(column) = attr.name().strip_prefix("data-field-") {
                if !column.is_empty() {
                    state.data.insert(column.to_owned(), DataValue::parse(attr.value()));
                }
            }
        }
        own_role
    }

    /// Role declared on the node itself: `data-role` first, then class tokens.
    fn own_role(&mut self, node: Node<'_, '_>) -> Option<Role> {
        if let Some(raw) = node.attribute("data-role") {
            let token = raw.trim();
            match Role::from_token(token) {
                Some(role) => return Some(role),
                None => self.warnings.push(
                    Diagnostic::warning(
                        Code::UnknownRoleToken,
                        format!("unknown role `{token}` ignored"),
                    )
                    .with_span(span_of(self.src, node))
                    .with_origin(Origin::Svg),
                ),
            }
        }
        node.attribute("class")
            .and_then(|c| c.split_whitespace().find_map(Role::from_token))
    }

    fn graphical(&mut self, node: Node<'_, '_>, tag: &str, state: &Inherited) {
        let index = self.graphical_index;
        self.graphical_index += 1;

        let wanted = match node.attribute("id") {
            Some(id) => id.to_owned(),
            None => format!("el-{index}"),
        };
        let id = self.claim_id(node, &wanted);

        let role = state.role.unwrap_or(if state.data.is_empty() {
            Role::Background
        } else {
            Role::Mark
        });

        let default_fill = if tag == "line" { "none" } else { "black" };
        let fill = state.fill.clone().unwrap_or_else(|| default_fill.to_owned());
        let stroke = state.stroke.clone().unwrap_or_else(|| "none".to_owned());
        let filled = !is_none(&fill);
        let stroked = !is_none(&stroke);
        let (paint, raw_color) = if (!filled && stroked) || tag == "line" {
            (Paint::Stroke, stroke.clone())
        } else {
            (Paint::Fill, fill.clone())
        };

        let (color, rgb) = if is_none(&raw_color) {
            let term = PaletteColor::Gray;
            (
                ColorTerm {
                    term,
                    raw: raw_color,
                },
                term.anchor(),
            )
        } else {
            let (color, warning) = canonical_color(&raw_color);
            if let Some(w) = warning {
                self.warnings
                    .push(w.with_span(span_of(self.src, node)).with_origin(Origin::Svg));
            }
            let rgb = parse_rgb(&raw_color).unwrap_or_else(|| color.term.anchor());
            (color, rgb)
        };

        let mut input = ShapeInput::new(tag, role, filled, stroked);
        let mut text = None;
        let local_hull: Vec<(f64, f64)> = match tag {
            "rect" => {
                let (x, y) = (num(node, "x"), num(node, "y"));
                let (w, h) = (num(node, "width").max(0.0), num(node, "height").max(0.0));
                vec![(x, y), (x + w, y), (x, y + h), (x + w, y + h)]
            }
            "circle" | "ellipse" => {
                let (cx, cy) = (num(node, "cx"), num(node, "cy"));
                let (rx, ry) = if tag == "circle" {
                    let r = num(node, "r");
                    (r, r)
                } else {
                    (num(node, "rx"), num(node, "ry"))
                };
                input = input.with_radius(rx.max(ry));
                let (rx, ry) = (rx.max(0.0), ry.max(0.0));
                vec![
                    (cx - rx, cy - ry),
                    (cx + rx, cy - ry),
                    (cx - rx, cy + ry),
                    (cx + rx, cy + ry),
                ]
            }
            "line" => {
                let a = (num(node, "x1"), num(node, "y1"));
                let b = (num(node, "x2"), num(node, "y2"));
                input = input.with_segment(a, b);
                vec![a, b]
            }
            "path" => {
                input = input.with_path(node.attribute("d").unwrap_or(""));
                input.outline.hull.clone()
            }
            "polyline" | "polygon" => {
                input = input.with_points(node.attribute("points").unwrap_or(""), tag == "polygon");
                input.outline.hull.clone()
            }
            "text" => {
                let content: String = node
                    .descendants()
                    .filter(|n| n.is_text())
                    .filter_map(|n| n.text())
                    .collect();
                let content = content.split_whitespace().collect::<Vec<_>>().join(" ");
                let fs = state.font_size.unwrap_or(DEFAULT_FONT_SIZE);
                let width = GLYPH_ADVANCE * fs * content.chars().count() as f64;
                let mut x = first_coordinate(node, "x");
                let y = first_coordinate(node, "y");
                match state.text_anchor.as_deref() {
                    Some("middle") => x -= width / 2.0,
                    Some("end") => x -= width,
                    _ => {}
                }
                let top = y - ASCENT * fs;
                text = Some(content);
                vec![(x, top), (x + width, top), (x, top + fs), (x + width, top + fs)]
            }
            _ => Vec::new(),
        };
        let world: Vec<(f64, f64)> = local_hull
            .iter()
            .map(|&p| apply(&state.transform, p))
            .collect();
        let bbox = BBox::from_points(&world);
        let bbox = if bbox.x.is_finite()
            && bbox.y.is_finite()
            && bbox.width.is_finite()
            && bbox.height.is_finite()
        {
            bbox
        } else {
            BBox::EMPTY
        };

        let (shape, warning) = classify_shape(&input);
        if let Some(w) = warning {
            self.warnings.push(
                w.with_span(span_of(self.src, node))
                    .with_origin(Origin::Svg),
            );
        }

        for &g in &state.group_chain {
            self.groups[g].members.push(id.clone());
        }
        self.elements.push(VisualElement {
            id,
            tag: tag.to_owned(),
            shape,
            color,
            paint,
            rgb,
            bbox,
            data: state.data.clone(),
            role,
            group_id: state.group.map(|g| self.groups[g].id.clone()),
            text,
            source_offset: node.range().start,
        });
    }
}

fn is_none(paint: &str) -> bool {
    paint.trim().eq_ignore_ascii_case("none") || paint.trim().eq_ignore_ascii_case("transparent")
}

/// Inline `style` wins over the presentation attribute.
fn presentation(node: Node<'_, '_>, name: &str) -> Option<String> {
    if let Some(style) = node.attribute("style") {
        for decl in style.split(';') {
            if let Some((k, v)) = decl.split_once(':') {
                if k.trim() == name {
                    return Some(v.trim().to_owned());
                }
            }
        }
    }
    node.attribute(name).map(|v| v.trim().to_owned())
}

fn length(raw: &str) -> Option<f64> {
    Length::from_str(raw.trim())
        .ok()
        .map(|l| l.number)
        .filter(|n| n.is_finite())
}

fn num(node: Node<'_, '_>, name: &str) -> f64 {
    node.attribute(name).and_then(length).unwrap_or(0.0)
}

/// `x`/`y` on text may be a list; the first entry positions the run.
fn first_coordinate(node: Node<'_, '_>, name: &str) -> f64 {
    node.attribute(name)
        .and_then(|v| v.split(|c: char| c == ',' || c.is_whitespace()).find(|s| !s.is_empty()).and_then(length))
        .unwrap_or(0.0)
}

fn canvas_of(root: Node<'_, '_>) -> Canvas {
    let view_box = root
        .attribute("viewBox")
        .and_then(|v| ViewBox::from_str(v).ok());
    let width = root
        .attribute("width")
        .and_then(length)
        .or(view_box.map(|v| v.w))
        .unwrap_or(300.0);
    let height = root
        .attribute("height")
        .and_then(length)
        .or(view_box.map(|v| v.h))
        .unwrap_or(150.0);
    Canvas { width, height }
}

fn span_of(src: &str, node: Node<'_, '_>) -> SourceSpan {
    let range = node.range();
    let start = src[..range.start].chars().count();
    let end = start + src[range.start..range.end].chars().count();
    SourceSpan::new(start, end)
}

fn char_offset_of_pos(src: &str, row: u32, col: u32) -> usize {
    let mut offset = 0;
    for (i, line) in src.split_inclusive('\n').enumerate() {
        if i + 1 == row as usize {
            return offset + (col as usize).saturating_sub(1).min(line.chars().count());
        }
        offset += line.chars().count();
    }
    offset
}

const TEMPORAL_HINTS: [&str; 6] = ["year", "date", "time", "month", "day", "period"];

fn infer_columns(elements: &[VisualElement]) -> BTreeMap<String, Column> {
    let mut values: BTreeMap<&str, Vec<&DataValue>> = BTreeMap::new();
    for e in elements {
        for (k, v) in &e.data {
            values.entry(k.as_str()).or_default().push(v);
        }
    }
    values
        .into_iter()
        .map(|(name, vals)| {
            let mut seen = HashMap::new();
            let mut domain = Vec::new();
            for v in &vals {
                seen.entry(v.match_key()).or_insert_with(|| {
                    domain.push((*v).clone());
                });
            }
            let numbers: Option<Vec<f64>> = vals.iter().map(|v| v.as_number()).collect();
            let lower = name.to_lowercase();
            let kind = match &numbers {
                Some(ns) => {
                    let hinted = TEMPORAL_HINTS.iter().any(|h| lower.contains(h));
                    let year_like = ns
                        .iter()
                        .all(|n| n.fract() == 0.0 && (1800.0..=2100.0).contains(n));
                    if hinted || year_like {
                        ColumnKind::Temporal
                    } else {
                        ColumnKind::Quantitative
                    }
                }
                None => ColumnKind::Categorical,
            };
            let (min, max) = match &numbers {
                Some(ns) if !ns.is_empty() => (
                    Some(ns.iter().copied().fold(f64::INFINITY, f64::min)),
                    Some(ns.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
                ),
                _ => (None, None),
            };
            (
                name.to_owned(),
                Column {
                    kind,
                    domain,
                    min,
                    max,
                },
            )
        })
        .collect()
}
