use crate::diagnostics::{has_errors, Code, Diagnostic, Origin, SourceSpan};

use super::{Block, Command, NarrationDocument, NarrationItem, TextSegment};

/// A successfully parsed document together with its non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub doc: NarrationDocument,
    pub warnings: Vec<Diagnostic>,
}

/// Parses annotated narration.
///
/// Returns every diagnostic (errors and warnings) when any of them is an
/// error. Orphan blocks and empty blocks are recoverable.
pub fn parse(source: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let mut parser = Parser {
        chars: source.chars().collect(),
        pos: 0,
        diags: Vec::new(),
        next_index: 0,
    };
    let items = parser.items(None);
    let diags = parser.diags;
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(Parsed {
        doc: NarrationDocument {
            items,
            source_text: source.to_owned(),
        },
        warnings: diags,
    })
}

/// Blocks nested deeper than this are rejected.
pub const MAX_BLOCK_DEPTH: usize = 64;

pub(super) fn is_escapable(c: char) -> bool {
    matches!(c, '{' | '}' | '[' | ']' | '\\')
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    diags: Vec<Diagnostic>,
    next_index: usize,
}

struct TextRun {
    text: String,
    start: Option<usize>,
}

impl TextRun {
    fn new() -> Self {
        Self {
            text: String::new(),
            start: None,
        }
    }

    fn push(&mut self, c: char, at: usize) {
        self.start.get_or_insert(at);
        self.text.push(c);
    }

    fn flush(&mut self, end: usize, items: &mut Vec<NarrationItem>) {
        if let Some(start) = self.start.take() {
            items.push(NarrationItem::Text(TextSegment {
                text: std::mem::take(&mut self.text),
                span: SourceSpan::new(start, end),
            }));
        }
    }
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn diag(&mut self, d: Diagnostic, span: SourceSpan) {
        self.diags
            .push(d.with_span(span).with_origin(Origin::Narration));
    }

    /// Reads items until end of input, or until the `]` closing the block at
    /// `block_depth` (left unconsumed).
    fn items(&mut self, block_depth: Option<usize>) -> Vec<NarrationItem> {
        let mut items = Vec::new();
        let mut run = TextRun::new();
        let mut orphan_depth = 0usize;

        while let Some(c) = self.peek() {
            let at = self.pos;
            match c {
                '\\' => match self.chars.get(at + 1) {
                    Some(&next) if is_escapable(next) => {
                        run.push(next, at);
                        self.pos += 2;
                    }
                    _ => {
                        run.push('\\', at);
                        self.pos += 1;
                    }
                },
                '{' => {
                    run.flush(at, &mut items);
                    let cmd = self.command(block_depth.unwrap_or(0));
                    items.push(NarrationItem::Command(cmd));
                }
                '}' => {
                    self.diag(
                        Diagnostic::error(Code::UnbalancedBrace, "`}` without a matching `{`"),
                        SourceSpan::new(at, at + 1),
                    );
                    run.push('}', at);
                    self.pos += 1;
                }
                '[' => {
                    self.diag(
                        Diagnostic::warning(
                            Code::OrphanBlock,
                            "`[` is not preceded by a command; treated as literal text",
                        ),
                        SourceSpan::new(at, at + 1),
                    );
                    orphan_depth += 1;
                    run.push('[', at);
                    self.pos += 1;
                }
                ']' => {
                    if orphan_depth > 0 {
                        orphan_depth -= 1;
                        run.push(']', at);
                        self.pos += 1;
                    } else if block_depth.is_some() {
                        break;
                    } else {
                        self.diag(
                            Diagnostic::error(
                                Code::UnbalancedBracket,
                                "`]` without a matching `[`",
                            ),
                            SourceSpan::new(at, at + 1),
                        );
                        run.push(']', at);
                        self.pos += 1;
                    }
                }
                _ => {
                    run.push(c, at);
                    self.pos += 1;
                }
            }
        }
        run.flush(self.pos, &mut items);
        items
    }

    fn command(&mut self, depth: usize) -> Command {
        let start = self.pos;
        let index = self.next_index;
        self.next_index += 1;
        self.pos += 1;

        let mut utterance = String::new();
        let mut closed = false;
        while let Some(c) = self.peek() {
            let at = self.pos;
            match c {
                '\\' => match self.chars.get(at + 1) {
                    Some(&next) if is_escapable(next) => {
                        utterance.push(next);
                        self.pos += 2;
                    }
                    _ => {
                        utterance.push('\\');
                        self.pos += 1;
                    }
                },
                '{' => {
                    self.diag(
                        Diagnostic::error(Code::NestedCommand, "`{` inside a command"),
                        SourceSpan::new(at, at + 1),
                    );
                    self.pos += 1;
                }
                '}' => {
                    closed = true;
                    self.pos += 1;
                    break;
                }
                _ => {
                    utterance.push(c);
                    self.pos += 1;
                }
            }
        }
        let utterance_end = if closed { self.pos - 1 } else { self.pos };
        let utterance_span = SourceSpan::new(start + 1, utterance_end);
        if !closed {
            self.diag(
                Diagnostic::error(Code::UnbalancedBrace, "command is never closed with `}`"),
                SourceSpan::new(start, self.pos),
            );
        } else if utterance.trim().is_empty() {
            self.diag(
                Diagnostic::warning(Code::EmptyCommand, "command has no text"),
                SourceSpan::new(start, self.pos),
            );
        }

        let mut blocks = Vec::new();
        let mut layout = Vec::new();
        if closed {
            loop {
                let mut look = self.pos;
                while look < self.chars.len() && self.chars[look].is_whitespace() {
                    look += 1;
                }
                if self.chars.get(look) != Some(&'[') {
                    break;
                }
                if depth + 1 > MAX_BLOCK_DEPTH {
                    self.diag(
                        Diagnostic::error(
                            Code::NestingTooDeep,
                            format!("blocks nest deeper than {MAX_BLOCK_DEPTH} levels"),
                        ),
                        SourceSpan::new(look, look + 1),
                    );
                    break;
                }
                layout.push(self.chars[self.pos..look].iter().collect());
                self.pos = look + 1;
                let items = self.items(Some(depth + 1));
                if self.peek() == Some(']') {
                    self.pos += 1;
                } else {
                    self.diag(
                        Diagnostic::error(Code::UnbalancedBracket, "block is never closed with `]`"),
                        SourceSpan::new(look, self.pos),
                    );
                }
                let span = SourceSpan::new(look, self.pos);
                let block = Block {
                    items,
                    depth: depth + 1,
                    span,
                };
                if block.text().is_empty() {
                    self.diag(
                        Diagnostic::warning(Code::EmptyBlock, "block contains no narration"),
                        span,
                    );
                }
                blocks.push(block);
            }
        }

        Command {
            utterance,
            bound_blocks: blocks,
            index,
            layout,
            span: SourceSpan::new(start, self.pos),
            utterance_span,
        }
    }
}
