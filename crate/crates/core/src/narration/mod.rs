//! Annotated narration: prose with inline `{command}` annotations and
//! `[segment]` timing notations.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! document := item*
//! item     := text | command
//! command  := '{' utterance '}' (ws* block)*
//! block    := '[' item* ']'
//! ```
//!
//! Commands never nest. Blocks nest through the commands they contain. A
//! command binds the maximal run of blocks that follows it; two or more bound
//! blocks form a parallel group. `\{ \} \[ \] \\` escape the notation
//! characters inside text and utterances.

mod parse;
mod plain;
mod serialize;

pub use parse::{parse, Parsed};
pub use plain::{plain_narration, project, BlockWords, CommandSite, Projection, Word};
pub use serialize::serialize;

use serde::{Deserialize, Serialize};

use crate::diagnostics::SourceSpan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NarrationDocument {
    pub items: Vec<NarrationItem>,
    pub source_text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NarrationItem {
    Text(TextSegment),
    Command(Command),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextSegment {
    /// Unescaped text.
    pub text: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Command {
    pub utterance: String,
    pub bound_blocks: Vec<Block>,
    /// Pre-order position among all commands of the document, from 0.
    pub index: usize,
    /// Whitespace found before each bound block; one entry per block.
    pub layout: Vec<String>,
    /// From `{` through the closing `]` of the last bound block.
    pub span: SourceSpan,
    /// Interior of the braces.
    pub utterance_span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub items: Vec<NarrationItem>,
    /// 1 for a block bound to a top-level command.
    pub depth: usize,
    /// Includes both brackets.
    pub span: SourceSpan,
}

impl NarrationDocument {
    pub fn empty() -> Self {
        Self {
            items: Vec::new(),
            source_text: String::new(),
        }
    }

    /// Span-free view of the tree, used for structural comparison.
    pub fn structure(&self) -> Vec<Node> {
        structure_of(&self.items)
    }

    pub fn same_structure(&self, other: &NarrationDocument) -> bool {
        self.structure() == other.structure()
    }

    /// All commands in pre-order (document order, outer before inner).
    pub fn commands(&self) -> Vec<&Command> {
        let mut out = Vec::new();
        collect_commands(&self.items, &mut out);
        out
    }

    pub fn max_depth(&self) -> usize {
        fn walk(items: &[NarrationItem]) -> usize {
            items
                .iter()
                .map(|item| match item {
                    NarrationItem::Text(_) => 0,
                    NarrationItem::Command(cmd) => cmd
                        .bound_blocks
                        .iter()
                        .map(|b| b.depth.max(walk(&b.items)))
                        .max()
                        .unwrap_or(0),
                })
                .max()
                .unwrap_or(0)
        }
        walk(&self.items)
    }
}

impl Command {
    pub fn is_parallel(&self) -> bool {
        self.bound_blocks.len() >= 2
    }
}

impl Block {
    /// Text content of the block with nested annotations removed.
    pub fn text(&self) -> String {
        let mut out = String::new();
        collect_text(&self.items, &mut out);
        out.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

fn collect_text(items: &[NarrationItem], out: &mut String) {
    for item in items {
        match item {
            NarrationItem::Text(t) => out.push_str(&t.text),
            NarrationItem::Command(cmd) => {
                for block in &cmd.bound_blocks {
                    out.push(' ');
                    collect_text(&block.items, out);
                    out.push(' ');
                }
            }
        }
    }
}

fn collect_commands<'a>(items: &'a [NarrationItem], out: &mut Vec<&'a Command>) {
    for item in items {
        if let NarrationItem::Command(cmd) = item {
            out.push(cmd);
            for block in &cmd.bound_blocks {
                collect_commands(&block.items, out);
            }
        }
    }
}

/// Span-free mirror of [`NarrationItem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Text(String),
    Command {
        utterance: String,
        layout: Vec<String>,
        blocks: Vec<Vec<Node>>,
    },
}

fn structure_of(items: &[NarrationItem]) -> Vec<Node> {
    items
        .iter()
        .map(|item| match item {
            NarrationItem::Text(t) => Node::Text(t.text.clone()),
            NarrationItem::Command(cmd) => Node::Command {
                utterance: cmd.utterance.clone(),
                layout: cmd.layout.clone(),
                blocks: cmd
                    .bound_blocks
                    .iter()
                    .map(|b| structure_of(&b.items))
                    .collect(),
            },
        })
        .collect()
}
