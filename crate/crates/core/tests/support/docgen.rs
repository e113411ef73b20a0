//! Random annotated narrations whose word layout is known up front, so
//! command placement can be predicted without the library's projection.

use proptest::prelude::*;
use proptest::sample::select;

use reelscript_core::narration::{parse, plain_narration};
use reelscript_core::timeline::{anchor_commands, compute_word_timings, TimingModel, WordTiming};

const VOCAB: &[&str] = &[
    "the", "bars", "rose", "sharply.", "Japan", "grew,", "2005", "slowly", "and", "fell!", "data", "points?", "x",
    "réseau", "long-winded;",
];
const UTTERANCES: &[&str] = &[
    "fade in the bars",
    "shine",
    "Hide other colored lines",
    "grow in",
    "highlight 2005",
    "fade out all lines",
];

#[derive(Debug, Clone)]
pub enum GenItem {
    Word(&'static str),
    Cmd {
        utterance: &'static str,
        blocks: Vec<Vec<GenItem>>,
    },
}

#[derive(Debug, Clone)]
pub struct GenCommand {
    pub utterance: &'static str,
    /// Words preceding the command.
    pub pos: usize,
    /// Half-open word ranges of the bound blocks.
    pub blocks: Vec<(usize, usize)>,
    /// Word range of the innermost enclosing block.
    pub enclosing: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct GenDoc {
    pub source: String,
    pub words: Vec<&'static str>,
    /// Pre-order.
    pub commands: Vec<GenCommand>,
}

fn word() -> impl Strategy<Value = GenItem> {
    select(VOCAB).prop_map(GenItem::Word)
}

fn item() -> impl Strategy<Value = GenItem> {
    word().prop_recursive(3, 40, 6, |inner| {
        let block = (select(VOCAB), prop::collection::vec(inner, 0..5)).prop_map(|(w, mut rest)| {
            rest.insert(0, GenItem::Word(w));
            rest
        });
        prop_oneof![
            3 => word(),
            2 => (select(UTTERANCES), prop::collection::vec(block, 0..4))
                .prop_map(|(utterance, blocks)| GenItem::Cmd { utterance, blocks }),
        ]
    })
}

pub fn gen_doc() -> impl Strategy<Value = GenDoc> {
    prop::collection::vec(item(), 0..24).prop_map(|items| build(&items))
}

pub fn timing_model() -> impl Strategy<Value = TimingModel> {
    (0.01f64..0.5, 0.001f64..0.1, 0.001f64..0.2, 0.001f64..0.8).prop_map(|(b, c, g, p)| TimingModel {
        base_word_seconds: b,
        per_char_seconds: c,
        inter_word_gap: g,
        sentence_pause: p,
    })
}

pub fn build(items: &[GenItem]) -> GenDoc {
    let mut doc = GenDoc {
        source: String::new(),
        words: Vec::new(),
        commands: Vec::new(),
    };
    let mut source = String::new();
    walk(items, &mut doc, &mut source);
    doc.source = source;
    doc
}

fn walk(items: &[GenItem], doc: &mut GenDoc, src: &mut String) {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            src.push(' ');
        }
        match item {
            GenItem::Word(w) => {
                src.push_str(w);
                doc.words.push(w);
            }
            GenItem::Cmd { utterance, blocks } => {
                src.push('{');
                src.push_str(utterance);
                src.push('}');
                let me = doc.commands.len();
                doc.commands.push(GenCommand {
                    utterance,
                    pos: doc.words.len(),
                    blocks: Vec::new(),
                    enclosing: None,
                });
                for block in blocks {
                    src.push('[');
                    let first = doc.words.len();
                    let inner = doc.commands.len();
                    walk(block, doc, src);
                    let range = (first, doc.words.len());
                    doc.commands[me].blocks.push(range);
                    // deeper commands were claimed by their own blocks already
                    for c in &mut doc.commands[inner..] {
                        c.enclosing.get_or_insert(range);
                    }
                    src.push(']');
                }
            }
        }
    }
}

/// One expected anchor: (command index, block index, trigger, duration).
pub type Expectation = (usize, Option<usize>, f64, Option<f64>);

pub fn expected_anchors(doc: &GenDoc, t: &[WordTiming]) -> Vec<Expectation> {
    let n = doc.words.len();
    let mut out = Vec::new();
    for (ci, c) in doc.commands.iter().enumerate() {
        match c.blocks.len() {
            0 => {
                let (a, b) = c.enclosing.unwrap_or((0, n));
                let trigger = if c.pos < b {
                    t[c.pos].start
                } else if b > a {
                    t[b - 1].end
                } else {
                    0.0
                };
                out.push((ci, None, trigger, None));
            }
            1 => {
                let (a, b) = c.blocks[0];
                out.push((ci, None, t[a].start, Some(t[b - 1].end - t[a].start)));
            }
            _ => {
                for (bi, &(a, b)) in c.blocks.iter().enumerate() {
                    out.push((ci, Some(bi), t[a].start, Some(t[b - 1].end - t[a].start)));
                }
            }
        }
    }
    out
}

/// Parses the generated source, times it and compares every anchor with
/// the prediction.
pub fn check_timeline(doc: &GenDoc, model: &TimingModel) -> Result<(), String> {
    let parsed = parse(&doc.source).map_err(|d| format!("parse failed: {d:?}"))?;
    let commands = parsed.doc.commands();
    if commands.len() != doc.commands.len() {
        return Err(format!("{} commands parsed, {} generated", commands.len(), doc.commands.len()));
    }
    for (c, g) in commands.iter().zip(&doc.commands) {
        if c.utterance != g.utterance || c.bound_blocks.len() != g.blocks.len() {
            return Err(format!("command {} parsed as {:?}", c.index, c.utterance));
        }
    }
    let plain = plain_narration(&parsed.doc);
    if plain != doc.words.join(" ") {
        return Err(format!("plain narration {plain:?}"));
    }
    let timings = compute_word_timings(&plain, model);
    if timings.len() != doc.words.len() {
        return Err(format!("{} timings for {} words", timings.len(), doc.words.len()));
    }
    let (anchors, _) = anchor_commands(&parsed.doc, &timings);
    let mut got: Vec<Expectation> = anchors
        .iter()
        .map(|a| (a.command_index, a.block_index, a.trigger, a.duration))
        .collect();
    let mut want = expected_anchors(doc, &timings);
    got.sort_by_key(|e| (e.0, e.1));
    want.sort_by_key(|e| (e.0, e.1));
    if got != want {
        return Err(format!("anchors differ\n got  {got:?}\n want {want:?}\n source {:?}", doc.source));
    }
    for a in &anchors {
        let on_boundary = a.trigger == 0.0 || timings.iter().any(|w| w.start == a.trigger || w.end == a.trigger);
        if !on_boundary {
            return Err(format!("trigger {} of command {} is not a word boundary", a.trigger, a.command_index));
        }
    }
    Ok(())
}
