use super::{Command, NarrationDocument, NarrationItem};
use crate::diagnostics::SourceSpan;

/// One narration word of the plain projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub text: String,
    /// Character offsets into the projected stream.
    start: usize,
    end: usize,
}

/// Half-open word range covered by a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockWords {
    pub first: usize,
    pub end: usize,
}

impl BlockWords {
    pub fn is_empty(&self) -> bool {
        self.first >= self.end
    }
}

/// Where a command sits relative to the narration words.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandSite {
    pub command_index: usize,
    pub utterance: String,
    pub span: SourceSpan,
    pub utterance_span: SourceSpan,
    /// First word that starts at or after the command position. A command
    /// placed inside a word snaps to the following word.
    pub anchor_word: Option<usize>,
    pub blocks: Vec<BlockWords>,
    pub block_texts: Vec<String>,
}

/// Plain narration with the bookkeeping needed to place commands on the
/// word timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub words: Vec<Word>,
    /// Pre-order, matching `Command::index`.
    pub commands: Vec<CommandSite>,
}

impl Projection {
    pub fn plain(&self) -> String {
        self.words
            .iter()
            .map(|w| w.text.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn word_texts(&self) -> Vec<&str> {
        self.words.iter().map(|w| w.text.as_str()).collect()
    }
}

/// Narration text with commands and notation brackets removed and spacing
/// normalized. Block edges act as word boundaries; commands do not.
pub fn plain_narration(doc: &NarrationDocument) -> String {
    project(doc).plain()
}

struct RawSite {
    index: usize,
    offset: usize,
    blocks: Vec<(usize, usize)>,
    block_texts: Vec<String>,
    utterance: String,
    span: SourceSpan,
    utterance_span: SourceSpan,
}

pub fn project(doc: &NarrationDocument) -> Projection {
    let mut stream: Vec<char> = Vec::new();
    let mut sites: Vec<RawSite> = Vec::new();
    walk(&doc.items, &mut stream, &mut sites);

    let mut words = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, &c) in stream.iter().enumerate() {
        if c.is_whitespace() {
            if let Some((start, text)) = current.take() {
                words.push(Word { text, start, end: i });
            }
        } else {
            current.get_or_insert_with(|| (i, String::new())).1.push(c);
        }
    }
    if let Some((start, text)) = current.take() {
        words.push(Word {
            text,
            start,
            end: stream.len(),
        });
    }

    sites.sort_by_key(|s| s.index);
    let commands = sites
        .into_iter()
        .map(|site| {
            let anchor_word = words.iter().position(|w| w.start >= site.offset);
            let blocks = site
                .blocks
                .iter()
                .map(|&(lo, hi)| {
                    let first = words.partition_point(|w| w.start < lo);
                    let end = words.partition_point(|w| w.end <= hi);
                    BlockWords {
                        first,
                        end: end.max(first),
                    }
                })
                .collect();
            CommandSite {
                command_index: site.index,
                utterance: site.utterance,
                span: site.span,
                utterance_span: site.utterance_span,
                anchor_word,
                blocks,
                block_texts: site.block_texts,
            }
        })
        .collect();

    Projection { words, commands }
}

fn walk(items: &[NarrationItem], stream: &mut Vec<char>, sites: &mut Vec<RawSite>) {
    for item in items {
        match item {
            NarrationItem::Text(t) => stream.extend(t.text.chars()),
            NarrationItem::Command(cmd) => walk_command(cmd, stream, sites),
        }
    }
}

fn walk_command(cmd: &Command, stream: &mut Vec<char>, sites: &mut Vec<RawSite>) {
    let slot = sites.len();
    sites.push(RawSite {
        index: cmd.index,
        offset: stream.len(),
        blocks: Vec::new(),
        block_texts: Vec::new(),
        utterance: cmd.utterance.clone(),
        span: cmd.span,
        utterance_span: cmd.utterance_span,
    });
    for block in &cmd.bound_blocks {
        stream.push(' ');
        let lo = stream.len();
        walk(&block.items, stream, sites);
        let hi = stream.len();
        stream.push(' ');
        sites[slot].blocks.push((lo, hi));
        sites[slot].block_texts.push(block.text());
    }
}
