use std::collections::BTreeMap;

use super::lexicon::{
    base_form, noun, ordinal_value, Noun, EASE_WORDS, EXCEPT_WORDS, NOT_ADVERBS, OTHER_WORDS,
    REUSE, STAGGER_ONE_BY_ONE, STAGGER_TOGETHER, VERBS,
};
use super::{
    Behavior, CommandIR, Direction, Easing, ElementFilter, Interpretation, Stagger,
};
use crate::diagnostics::{Code, Diagnostic, Origin, SourceSpan};
use crate::scene::{Column, ColumnKind, DataValue, PaletteColor, VisualScene};

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Word,
    Number(f64),
    Dash,
    Quoted,
    Punct,
}

#[derive(Debug, Clone)]
struct Token {
    /// Lowercased text (quoted strings keep their interior verbatim).
    text: String,
    kind: Kind,
    start: usize,
    end: usize,
}

fn tokenize(src: &str) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' || c == '\u{201c}' {
            let close = |d: char| d == '"' || d == '\u{201d}';
            match chars[i + 1..].iter().position(|&d| close(d)) {
                Some(len) => {
                    let text: String = chars[i + 1..i + 1 + len].iter().collect();
                    out.push(Token {
                        text: text.trim().to_owned(),
                        kind: Kind::Quoted,
                        start: i,
                        end: i + len + 2,
                    });
                    i += len + 2;
                }
                None => {
                    out.push(punct(c, i));
                    i += 1;
                }
            }
        } else if c.is_alphanumeric() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric()
                    || (chars[i] == '.'
                        && i + 1 < chars.len()
                        && chars[i + 1].is_ascii_digit()
                        && chars[start..i].iter().all(|d| d.is_ascii_digit() || *d == '.'))
                    || (chars[i] == '\'' && i + 1 < chars.len() && chars[i + 1].is_alphabetic()))
            {
                i += 1;
            }
            let raw: String = chars[start..i].iter().collect();
            let text = raw.to_lowercase();
            let kind = match text.parse::<f64>() {
                Ok(n) if n.is_finite() && text.chars().all(|d| d.is_ascii_digit() || d == '.') => {
                    Kind::Number(n)
                }
                _ => Kind::Word,
            };
            out.push(Token {
                text,
                kind,
                start,
                end: i,
            });
        } else if matches!(c, '-' | '\u{2013}' | '\u{2014}') {
            out.push(Token {
                text: "-".into(),
                kind: Kind::Dash,
                start: i,
                end: i + 1,
            });
            i += 1;
        } else {
            out.push(punct(c, i));
            i += 1;
        }
    }
    out
}

fn punct(c: char, i: usize) -> Token {
    Token {
        text: c.to_string(),
        kind: Kind::Punct,
        start: i,
        end: i + 1,
    }
}

/// Tokenized utterance with a consumption mask so each token feeds at most
/// one extraction rule.
struct Cursor {
    tokens: Vec<Token>,
    used: Vec<bool>,
}

impl Cursor {
    fn new(src: &str) -> Self {
        let tokens = tokenize(src);
        let used = vec![false; tokens.len()];
        Self { tokens, used }
    }

    fn len(&self) -> usize {
        self.tokens.len()
    }

    fn text(&self, i: usize) -> &str {
        self.tokens.get(i).map(|t| t.text.as_str()).unwrap_or("")
    }

    fn free(&self, i: usize) -> bool {
        i < self.tokens.len() && !self.used[i]
    }

    /// Unconsumed occurrence of `phrase` starting at `i`, matched on base forms.
    fn phrase_at(&self, i: usize, phrase: &[&str]) -> bool {
        i + phrase.len() <= self.len()
            && phrase
                .iter()
                .enumerate()
                .all(|(k, w)| self.free(i + k) && base_form(self.text(i + k)) == *w)
    }

    fn find_phrase(&self, phrase: &[&str]) -> Option<usize> {
        (0..self.len()).find(|&i| self.phrase_at(i, phrase))
    }

    fn consume(&mut self, i: usize, n: usize) {
        for k in i..(i + n).min(self.len()) {
            self.used[k] = true;
        }
    }

    fn span(&self, i: usize, n: usize) -> SourceSpan {
        let last = (i + n).min(self.len()).saturating_sub(1);
        SourceSpan::new(self.tokens[i].start, self.tokens[last].end)
    }

    fn number(&self, i: usize) -> Option<f64> {
        match self.tokens.get(i)?.kind {
            Kind::Number(n) if !self.used[i] => Some(n),
            _ => None,
        }
    }
}

/// Filters collected with the token position they came from, so the final
/// list follows utterance order.
struct Collected {
    positive: Vec<(usize, ElementFilter)>,
    /// Entities named after an "except"-style keyword.
    excluded: Vec<(usize, ElementFilter)>,
}

pub fn interpret(utterance: &str, context: &str, scene: &VisualScene) -> Interpretation {
    let mut diagnostics = Vec::new();
    if utterance.trim().is_empty() {
        diagnostics.push(
            Diagnostic::error(Code::EmptyUtterance, "command is empty")
                .with_span(SourceSpan::new(0, utterance.chars().count()))
                .with_origin(Origin::Utterance),
        );
        let mut ir = CommandIR::new(Behavior::Emphasis);
        ir.filters.push(ElementFilter::All);
        return Interpretation { ir, diagnostics };
    }

    let mut cur = Cursor::new(utterance);

    if let Some(i) = (0..cur.len()).find(|&i| matches!(cur.text(i), "opening" | "intro" | "introduction")) {
        cur.consume(i, 1);
        let mut ir = CommandIR::new(Behavior::Opening);
        ir.effect = Some("opening".into());
        read_modifiers(&mut cur, &mut ir);
        return Interpretation { ir, diagnostics };
    }

    let mut ir = CommandIR::new(Behavior::Emphasis);
    let verb = find_verb(&mut cur);
    if let Some((behavior, effect)) = verb {
        ir.behavior = behavior;
        ir.effect = effect.map(str::to_owned);
    }
    for phrase in REUSE {
        if let Some(i) = cur.find_phrase(phrase) {
            cur.consume(i, phrase.len());
            ir.reuse_previous = true;
            break;
        }
    }
    // a bare "same as above" inherits the behavior later
    if verb.is_none() && !ir.reuse_previous {
        diagnostics.push(
            Diagnostic::warning(
                Code::NoBehaviorDetected,
                "no animation verb found; using emphasis",
            )
            .with_span(SourceSpan::new(0, utterance.chars().count()))
            .with_origin(Origin::Utterance),
        );
    }
    read_modifiers(&mut cur, &mut ir);

    let except_at = EXCEPT_WORDS.iter().find_map(|phrase| {
        cur.find_phrase(phrase).inspect(|&i| cur.consume(i, phrase.len()))
    });

    let mut found = Collected {
        positive: Vec::new(),
        excluded: Vec::new(),
    };
    let push = |found: &mut Collected, at: usize, f: ElementFilter| match except_at {
        Some(k) if at > k => found.excluded.push((at, f)),
        _ => found.positive.push((at, f)),
    };

    for (at, f) in ranges(&mut cur, scene, &mut diagnostics) {
        push(&mut found, at, f);
    }
    if let Some((at, f)) = position(&mut cur) {
        found.positive.push((at, f));
    }
    direction_property(&mut cur, &mut ir);

    for (at, f) in domain_values(&mut cur, scene) {
        push(&mut found, at, f);
    }
    for i in 0..cur.len() {
        if cur.free(i) && cur.tokens[i].kind == Kind::Quoted && !cur.text(i).is_empty() {
            cur.consume(i, 1);
            let substring = cur.tokens[i].text.clone();
            push(&mut found, i, ElementFilter::TextMatch { substring });
        }
    }
    for (at, f) in colors(&mut cur, &mut ir) {
        push(&mut found, at, f);
    }

    let mut scope: Vec<(usize, ElementFilter)> = Vec::new();
    for i in 0..cur.len() {
        if !cur.free(i) {
            continue;
        }
        let f = match noun(cur.text(i)) {
            Some(Noun::Shape(shape)) => ElementFilter::Shape { shape },
            Some(Noun::Role(role)) => ElementFilter::RoleIs { role },
            None => continue,
        };
        cur.consume(i, 1);
        if !scope.iter().any(|(_, g)| *g == f) {
            scope.push((i, f));
        }
    }
    if let Some(f) = any_of(scope.iter().map(|(_, f)| f.clone()).collect()) {
        found.positive.push((scope[0].0, f));
    }

    let mut negation: Option<(usize, ElementFilter)> = None;
    if let Some(k) = except_at {
        match any_of(found.excluded.iter().map(|(_, f)| f.clone()).collect()) {
            Some(inner) => negation = Some((k, ElementFilter::negate(inner))),
            None => diagnostics.push(
                Diagnostic::warning(
                    Code::NegationWithoutContext,
                    "nothing named after the exclusion keyword; ignoring it",
                )
                .with_span(cur.span(k, 1))
                .with_origin(Origin::Utterance),
            ),
        }
    }
    let keeps_one = ir.effect.as_deref() == Some("keep-one-fade-others");
    if negation.is_none() && !keeps_one {
        if let Some(k) = (0..cur.len()).find(|&i| cur.free(i) && OTHER_WORDS.contains(&cur.text(i))) {
            cur.consume(k, 1);
            let entities = context_entities(context, scene);
            match any_of(entities) {
                Some(inner) => negation = Some((k, ElementFilter::negate(inner))),
                None => diagnostics.push(
                    Diagnostic::warning(
                        Code::NegationWithoutContext,
                        format!(
                            "`{}` refers to the narration, but it names no data value or color",
                            cur.text(k)
                        ),
                    )
                    .with_span(cur.span(k, 1))
                    .with_origin(Origin::Utterance),
                ),
            }
        }
    }

    let mut filters = found.positive;
    if let Some((k, neg)) = negation {
        if !filters.iter().any(|(_, f)| f.is_scope() || is_scope_union(f)) {
            filters.push((usize::MAX, ElementFilter::All));
        }
        filters.push((k, neg));
    }
    filters.sort_by_key(|(at, _)| *at);
    ir.filters = filters.into_iter().map(|(_, f)| f).collect();

    if ir.filters.is_empty() {
        let says_all = (0..cur.len()).any(|i| {
            matches!(cur.text(i), "all" | "everything" | "every" | "each" | "whole" | "entire")
        });
        let entities = if says_all {
            Vec::new()
        } else {
            context_entities(context, scene)
        };
        ir.filters = match entities.len() {
            0 => vec![ElementFilter::All],
            _ => group_entities(entities),
        };
    }

    unknown_modifiers(&cur, &mut diagnostics);
    Interpretation { ir, diagnostics }
}

fn is_scope_union(f: &ElementFilter) -> bool {
    matches!(f, ElementFilter::AnyOf { filters } if filters.iter().all(|g| g.is_scope()))
}

fn any_of(mut filters: Vec<ElementFilter>) -> Option<ElementFilter> {
    match filters.len() {
        0 => None,
        1 => filters.pop(),
        _ => Some(ElementFilter::AnyOf { filters }),
    }
}

/// Colors in one filter, data values in another; each is a one-of.
fn group_entities(entities: Vec<ElementFilter>) -> Vec<ElementFilter> {
    let (colors, data): (Vec<_>, Vec<_>) = entities
        .into_iter()
        .partition(|f| matches!(f, ElementFilter::Color { .. }));
    let mut out = Vec::new();
    if let Some(f) = any_of(data) {
        out.push(f);
    }
    if let Some(f) = any_of(colors) {
        out.push(f);
    }
    if out.len() == 2 {
        // a narration naming both a value and a color means either
        vec![ElementFilter::AnyOf { filters: out }]
    } else {
        out
    }
}

fn find_verb(cur: &mut Cursor) -> Option<(Behavior, Option<&'static str>)> {
    for i in 0..cur.len() {
        if base_form(cur.text(i)) == "change" {
            if let Some(k) = (i + 1..(i + 4).min(cur.len()))
                .find(|&k| matches!(cur.text(k), "color" | "colour" | "colors" | "colours"))
            {
                cur.consume(i, 1);
                cur.consume(k, 1);
                return Some((Behavior::Emphasis, Some("change-color")));
            }
        }
        for (phrase, behavior, effect) in VERBS {
            if cur.phrase_at(i, phrase) {
                cur.consume(i, phrase.len());
                return Some((*behavior, *effect));
            }
        }
    }
    None
}

fn read_modifiers(cur: &mut Cursor, ir: &mut CommandIR) {
    let staggers = STAGGER_ONE_BY_ONE
        .iter()
        .map(|p| (p, Stagger::OneByOne))
        .chain(STAGGER_TOGETHER.iter().map(|p| (p, Stagger::Together)));
    for (phrase, stagger) in staggers {
        if let Some(i) = cur.find_phrase(phrase) {
            cur.consume(i, phrase.len());
            ir.properties.stagger.get_or_insert(stagger);
        }
    }
    for i in 0..cur.len() {
        if cur.free(i) && EASE_WORDS.contains(&cur.text(i)) {
            cur.consume(i, 1);
            ir.properties.easing = Some(Easing::EaseInOut);
        }
    }
}

type RangeMatch = (usize, usize, Option<f64>, Option<f64>, bool);

fn ranges(
    cur: &mut Cursor,
    scene: &VisualScene,
    diagnostics: &mut Vec<Diagnostic>,
) -> Vec<(usize, ElementFilter)> {
    // (token, token count, lo, hi, strict)
    let mut found: Vec<RangeMatch> = Vec::new();
    let mut i = 0;
    while i < cur.len() {
        let t = cur.text(i);
        // between X and Y / from X to Y
        if cur.free(i) && matches!(t, "between" | "from") {
            let joiner = if t == "between" { "and" } else { "to" };
            if let (Some(a), true, Some(b)) = (cur.number(i + 1), cur.free(i + 2) && cur.text(i + 2) == joiner, cur.number(i + 3)) {
                found.push((i, 4, Some(a.min(b)), Some(a.max(b)), false));
                cur.consume(i, 4);
                i += 4;
                continue;
            }
        }
        // X-Y / X to Y
        if let Some(a) = cur.number(i) {
            let joined = cur.free(i + 1) && (cur.tokens.get(i + 1).map(|t| t.kind == Kind::Dash).unwrap_or(false) || cur.text(i + 1) == "to");
            if joined {
                if let Some(b) = cur.number(i + 2) {
                    found.push((i, 3, Some(a.min(b)), Some(a.max(b)), false));
                    cur.consume(i, 3);
                    i += 3;
                    continue;
                }
            }
        }
        // comparatives
        if cur.free(i) {
            let (lo_words, hi_words) = (
                ["larger", "greater", "more", "higher", "bigger", "over", "above"],
                ["less", "smaller", "fewer", "lower", "under", "below"],
            );
            let is_lo = lo_words.contains(&t);
            let is_hi = hi_words.contains(&t);
            if is_lo || is_hi {
                let (n, len) = if cur.free(i + 1) && cur.text(i + 1) == "than" {
                    (cur.number(i + 2), 3)
                } else {
                    (cur.number(i + 1), 2)
                };
                if let Some(n) = n {
                    let (lo, hi) = if is_lo { (Some(n), None) } else { (None, Some(n)) };
                    found.push((i, len, lo, hi, true));
                    cur.consume(i, len);
                    i += len;
                    continue;
                }
            }
            if t == "at" && cur.free(i + 1) && matches!(cur.text(i + 1), "least" | "most") {
                if let Some(n) = cur.number(i + 2) {
                    let (lo, hi) = if cur.text(i + 1) == "least" { (Some(n), None) } else { (None, Some(n)) };
                    found.push((i, 3, lo, hi, false));
                    cur.consume(i, 3);
                    i += 3;
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut out = Vec::new();
    for (at, len, lo, hi, strict) in found {
        match range_column(scene, lo, hi) {
            Some(column) => out.push((
                at,
                ElementFilter::DataRange {
                    column,
                    lo,
                    hi,
                    strict,
                },
            )),
            None => diagnostics.push(
                Diagnostic::error(
                    Code::CategoricalRange,
                    "range given but the chart has no quantitative or temporal column",
                )
                .with_span(cur.span(at, len))
                .with_origin(Origin::Utterance),
            ),
        }
    }
    out
}

/// Picks the numeric column a range most plausibly refers to: one whose
/// extent contains the bounds, temporal before quantitative, then by name.
fn range_column(scene: &VisualScene, lo: Option<f64>, hi: Option<f64>) -> Option<String> {
    let numeric: Vec<(&String, &Column)> = scene
        .columns
        .iter()
        .filter(|(_, c)| c.is_numeric())
        .collect();
    let year_like = [lo, hi]
        .iter()
        .flatten()
        .all(|n| n.fract() == 0.0 && (1800.0..=2100.0).contains(n));
    let score = |c: &Column| {
        let inside = |v: Option<f64>| match (v, c.min, c.max) {
            (Some(v), Some(min), Some(max)) => v >= min && v <= max,
            _ => false,
        };
        let contains = inside(lo) as u8 + inside(hi) as u8;
        let temporal_fit = (c.kind == ColumnKind::Temporal) == year_like;
        (contains, temporal_fit as u8)
    };
    numeric
        .iter()
        .max_by(|a, b| score(a.1).cmp(&score(b.1)).then(b.0.cmp(a.0)))
        .map(|(name, _)| (*name).clone())
}

fn position(cur: &mut Cursor) -> Option<(usize, ElementFilter)> {
    for i in 0..cur.len() {
        if !cur.free(i) {
            continue;
        }
        let extreme = match cur.text(i) {
            "leftmost" => Some(Direction::Left),
            "rightmost" => Some(Direction::Right),
            "topmost" => Some(Direction::Top),
            "bottommost" => Some(Direction::Bottom),
            _ => None,
        };
        if let Some(direction) = extreme {
            cur.consume(i, 1);
            return Some((i, ElementFilter::Position { direction, order: 1 }));
        }
        let Some(order) = ordinal_value(cur.text(i)) else {
            continue;
        };
        cur.consume(i, 1);
        let mut direction = Direction::Left;
        for j in i + 1..(i + 6).min(cur.len()) {
            if cur.free(j) && cur.text(j) == "from" {
                let k = if cur.text(j + 1) == "the" { j + 2 } else { j + 1 };
                if let Some(d) = Direction::from_word(cur.text(k)).filter(|_| cur.free(k)) {
                    direction = d;
                    cur.consume(j, k - j + 1);
                }
                break;
            }
        }
        return Some((i, ElementFilter::Position { direction, order }));
    }
    None
}

fn direction_property(cur: &mut Cursor, ir: &mut CommandIR) {
    for j in 0..cur.len() {
        if cur.free(j) && cur.text(j) == "from" {
            let k = if cur.text(j + 1) == "the" { j + 2 } else { j + 1 };
            if let Some(d) = Direction::from_word(cur.text(k)).filter(|_| cur.free(k)) {
                ir.properties.direction = Some(d);
                cur.consume(j, k - j + 1);
                return;
            }
        }
        let d = match cur.text(j) {
            "upward" | "upwards" => Some(Direction::Bottom),
            "downward" | "downwards" => Some(Direction::Top),
            _ => None,
        };
        if let Some(d) = d.filter(|_| cur.free(j)) {
            ir.properties.direction = Some(d);
            cur.consume(j, 1);
            return;
        }
    }
}

/// Domain values appearing as whole-token sequences, longest match first.
fn domain_values(cur: &mut Cursor, scene: &VisualScene) -> Vec<(usize, ElementFilter)> {
    let hits = match_domain(cur, scene);
    let mut by_column: BTreeMap<&str, (usize, Vec<DataValue>)> = BTreeMap::new();
    for (at, len, column, value) in &hits {
        cur.consume(*at, *len);
        let entry = by_column.entry(column.as_str()).or_insert((*at, Vec::new()));
        entry.0 = entry.0.min(*at);
        if !entry.1.iter().any(|v| v.loosely_equals(value)) {
            entry.1.push(value.clone());
        }
    }
    by_column
        .into_iter()
        .map(|(column, (at, values))| {
            (
                at,
                ElementFilter::DataEqual {
                    column: column.to_owned(),
                    values,
                },
            )
        })
        .collect()
}

fn match_domain(cur: &Cursor, scene: &VisualScene) -> Vec<(usize, usize, String, DataValue)> {
    let mut candidates: Vec<(usize, usize, u8, String, DataValue)> = Vec::new();
    for (name, column) in &scene.columns {
        let rank = match column.kind {
            ColumnKind::Temporal => 0,
            ColumnKind::Categorical => 1,
            ColumnKind::Quantitative => 2,
        };
        for value in &column.domain {
            let pattern: Vec<Token> = tokenize(&value.to_string())
                .into_iter()
                .filter(|t| t.kind != Kind::Punct)
                .collect();
            if pattern.is_empty() {
                continue;
            }
            for i in 0..cur.len() {
                let mut j = i;
                let mut ok = true;
                for p in &pattern {
                    let tok_ok = j < cur.len()
                        && cur.free(j)
                        && match (&p.kind, &cur.tokens[j].kind) {
                            (Kind::Number(a), Kind::Number(b)) => a == b,
                            _ => p.text == cur.tokens[j].text,
                        };
                    if !tok_ok {
                        ok = false;
                        break;
                    }
                    j += 1;
                }
                if ok {
                    candidates.push((i, j - i, rank, name.clone(), value.clone()));
                }
            }
        }
    }
    // longest first, then earliest, then column preference
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
    let mut taken = vec![false; cur.len()];
    let mut out = Vec::new();
    for (at, len, _, column, value) in candidates {
        if taken[at..at + len].iter().any(|t| *t) {
            continue;
        }
        for t in &mut taken[at..at + len] {
            *t = true;
        }
        out.push((at, len, column, value));
    }
    out.sort_by_key(|h| h.0);
    out
}

fn colors(cur: &mut Cursor, ir: &mut CommandIR) -> Vec<(usize, ElementFilter)> {
    let positions: Vec<(usize, PaletteColor)> = (0..cur.len())
        .filter(|&i| cur.free(i))
        .filter_map(|i| PaletteColor::from_word(cur.text(i)).map(|c| (i, c)))
        .collect();
    let mut terms: Vec<(usize, PaletteColor)> = Vec::new();
    for (n, &(i, color)) in positions.iter().enumerate() {
        cur.consume(i, 1);
        let before = if i > 0 { cur.text(i - 1) } else { "" };
        let before_free = i > 0 && cur.free(i - 1);
        let next_is_noun = noun(cur.text(i + 1)).is_some();
        let target_word = before_free && matches!(before, "to" | "into" | "in");
        let last_for_recolor =
            ir.effect.as_deref() == Some("change-color") && n + 1 == positions.len() && !next_is_noun;
        if (target_word && !next_is_noun) || last_for_recolor {
            ir.properties.color = Some(color);
            if target_word {
                cur.consume(i - 1, 1);
            }
        } else if !terms.iter().any(|(_, c)| *c == color) {
            terms.push((i, color));
        }
    }
    match terms.len() {
        0 => Vec::new(),
        1 => vec![(terms[0].0, ElementFilter::Color { term: terms[0].1 })],
        _ => vec![(
            terms[0].0,
            ElementFilter::AnyOf {
                filters: terms
                    .iter()
                    .map(|(_, c)| ElementFilter::Color { term: *c })
                    .collect(),
            },
        )],
    }
}

/// Data values and color words named in a narration segment, as filters.
pub(crate) fn context_entities(context: &str, scene: &VisualScene) -> Vec<ElementFilter> {
    let mut cur = Cursor::new(context);
    let mut out: Vec<ElementFilter> = domain_values(&mut cur, scene)
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    let mut seen = Vec::new();
    for i in 0..cur.len() {
        if !cur.free(i) {
            continue;
        }
        if let Some(term) = PaletteColor::from_word(cur.text(i)) {
            if !seen.contains(&term) {
                seen.push(term);
                out.push(ElementFilter::Color { term });
            }
        }
    }
    out
}

fn unknown_modifiers(cur: &Cursor, diagnostics: &mut Vec<Diagnostic>) {
    for i in 0..cur.len() {
        let t = cur.text(i);
        if cur.free(i)
            && cur.tokens[i].kind == Kind::Word
            && t.len() >= 4
            && t.ends_with("ly")
            && !NOT_ADVERBS.contains(&t)
        {
            diagnostics.push(
                Diagnostic::warning(
                    Code::UnknownModifier,
                    format!("modifier `{t}` is not supported; defaults apply"),
                )
                .with_span(cur.span(i, 1))
                .with_origin(Origin::Utterance),
            );
        }
    }
}
