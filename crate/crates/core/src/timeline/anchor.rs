use serde::{Deserialize, Serialize};

use super::{ends_sentence, WordTiming};
use crate::diagnostics::{Code, Diagnostic, Origin, SourceSpan};
use crate::interpret::{CommandIR, InterpreterAdapter};
use crate::narration::{project, BlockWords, CommandSite, NarrationDocument, NarrationItem, Projection};
use crate::scene::VisualScene;

/// A command placed on the timeline, before interpretation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub command_index: usize,
    pub utterance: String,
    pub utterance_span: SourceSpan,
    pub trigger: f64,
    /// Present when a block supplies the duration.
    pub duration: Option<f64>,
    /// Narration the command refers to: its block, or the sentence around
    /// the anchor word.
    pub segment_text: String,
    /// Set for units expanded from a parallel group.
    pub block_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchoredCommand {
    pub anchor: Anchor,
    pub command: CommandIR,
}

/// Anchors in document pre-order, parallel groups expanded in block order.
pub fn anchor_commands(
    doc: &NarrationDocument,
    timings: &[WordTiming],
) -> (Vec<Anchor>, Vec<Diagnostic>) {
    let projection = project(doc);
    let mut out = Vec::new();
    let mut diags = Vec::new();
    walk(&doc.items, None, &projection, timings, &mut out, &mut diags);
    (out, diags)
}

fn walk(
    items: &[NarrationItem],
    enclosing: Option<BlockWords>,
    projection: &Projection,
    timings: &[WordTiming],
    out: &mut Vec<Anchor>,
    diags: &mut Vec<Diagnostic>,
) {
    for item in items {
        let NarrationItem::Command(cmd) = item else {
            continue;
        };
        let site = &projection.commands[cmd.index];
        out.extend(anchor_site(site, enclosing, projection, timings, diags));
        for (block, words) in cmd.bound_blocks.iter().zip(&site.blocks) {
            walk(&block.items, Some(*words), projection, timings, out, diags);
        }
    }
}

fn anchor_site(
    site: &CommandSite,
    enclosing: Option<BlockWords>,
    projection: &Projection,
    timings: &[WordTiming],
    diags: &mut Vec<Diagnostic>,
) -> Vec<Anchor> {
    let non_empty = site.blocks.iter().filter(|b| !b.is_empty()).count();
    if site.blocks.len() >= 2 {
        return expand_parallel(site, enclosing, projection, timings, diags);
    }
    if non_empty == 1 {
        let words = site.blocks[0];
        let (trigger, duration) = block_span(words, timings);
        return vec![Anchor {
            command_index: site.command_index,
            utterance: site.utterance.clone(),
            utterance_span: site.utterance_span,
            trigger,
            duration: Some(duration),
            segment_text: site.block_texts[0].clone(),
            block_index: None,
        }];
    }
    vec![blockless(site, site.anchor_word, enclosing, projection, timings, None, diags)]
}

fn block_span(words: BlockWords, timings: &[WordTiming]) -> (f64, f64) {
    let start = timings[words.first].start;
    let end = timings[words.end - 1].end;
    (start, end - start)
}

fn blockless(
    site: &CommandSite,
    anchor_word: Option<usize>,
    enclosing: Option<BlockWords>,
    projection: &Projection,
    timings: &[WordTiming],
    block_index: Option<usize>,
    diags: &mut Vec<Diagnostic>,
) -> Anchor {
    // a command trailing its enclosing block fires at the block's end
    let overruns = |w: Option<usize>| match (enclosing, w) {
        (Some(b), Some(w)) if !b.is_empty() => w >= b.end,
        (Some(b), None) => !b.is_empty(),
        _ => false,
    };
    let (trigger, sentence_word) = if overruns(anchor_word) {
        let last = enclosing.map(|b| b.end - 1).unwrap_or(0);
        (timings[last].end, Some(last))
    } else {
        match anchor_word {
            Some(w) if w < timings.len() => (timings[w].start, Some(w)),
            _ => match timings.last() {
                Some(last) => (last.end, Some(timings.len() - 1)),
                None => {
                    diags.push(
                        Diagnostic::warning(
                            Code::CommandInEmptyNarration,
                            "the narration has no words; the command starts at 0",
                        )
                        .with_span(site.span)
                        .with_origin(Origin::Narration),
                    );
                    (0.0, None)
                }
            },
        }
    };
    Anchor {
        command_index: site.command_index,
        utterance: site.utterance.clone(),
        utterance_span: site.utterance_span,
        trigger,
        duration: None,
        segment_text: sentence_words(projection, sentence_word),
        block_index,
    }
}

/// The sentence containing word `w`.
fn sentence_words(projection: &Projection, w: Option<usize>) -> String {
    let Some(w) = w else {
        return String::new();
    };
    let words = projection.word_texts();
    if w >= words.len() {
        return String::new();
    }
    let mut start = w;
    while start > 0 && !ends_sentence(words[start - 1]) {
        start -= 1;
    }
    let mut end = w;
    while end + 1 < words.len() && !ends_sentence(words[end]) {
        end += 1;
    }
    words[start..=end].join(" ")
}

/// One anchor per block, each timed and contextualized by its own block.
pub fn expand_parallel(
    site: &CommandSite,
    enclosing: Option<BlockWords>,
    projection: &Projection,
    timings: &[WordTiming],
    diags: &mut Vec<Diagnostic>,
) -> Vec<Anchor> {
    site.blocks
        .iter()
        .enumerate()
        .map(|(i, words)| {
            if words.is_empty() {
                let at = (words.first < timings.len()).then_some(words.first);
                let mut a = blockless(site, at, enclosing, projection, timings, Some(i), diags);
                a.segment_text = site.block_texts[i].clone();
                a
            } else {
                let (trigger, duration) = block_span(*words, timings);
                Anchor {
                    command_index: site.command_index,
                    utterance: site.utterance.clone(),
                    utterance_span: site.utterance_span,
                    trigger,
                    duration: Some(duration),
                    segment_text: site.block_texts[i].clone(),
                    block_index: Some(i),
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Resolved {
    /// Sorted by trigger, ties in document order.
    pub commands: Vec<AnchoredCommand>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Anchors every command, interprets each anchor against its own segment
/// and orders the result on the timeline.
pub fn resolve_nested(
    doc: &NarrationDocument,
    timings: &[WordTiming],
    scene: &VisualScene,
    adapter: &dyn InterpreterAdapter,
) -> Resolved {
    let (anchors, mut diagnostics) = anchor_commands(doc, timings);
    let mut commands: Vec<AnchoredCommand> = anchors
        .into_iter()
        .map(|anchor| {
            let result = adapter.interpret(&anchor.utterance, &anchor.segment_text, scene);
            for d in result.diagnostics {
                diagnostics.push(relocate(d, &anchor));
            }
            AnchoredCommand {
                anchor,
                command: result.ir,
            }
        })
        .collect();
    // stable: equal triggers keep document order
    commands.sort_by(|a, b| a.anchor.trigger.total_cmp(&b.anchor.trigger));
    Resolved {
        commands,
        diagnostics,
    }
}

/// Moves an utterance-relative span into narration coordinates. Escapes
/// inside the utterance break the offset mapping, so those fall back to the
/// whole utterance.
fn relocate(d: Diagnostic, anchor: &Anchor) -> Diagnostic {
    let outer = anchor.utterance_span;
    let verbatim = outer.len() == anchor.utterance.chars().count();
    match d.span {
        Some(inner) if verbatim && inner.end <= outer.len() => {
            let span = SourceSpan::new(outer.start + inner.start, outer.start + inner.end);
            d.relocate(span, Origin::Narration)
        }
        _ => d.relocate(outer, Origin::Narration),
    }
}
