use super::{NarrationDocument, NarrationItem};

/// Canonical annotated text for a document; `parse` of the result yields a
/// structurally identical tree.
pub fn serialize(doc: &NarrationDocument) -> String {
    let mut out = String::new();
    write_items(&doc.items, &mut out);
    out
}

fn write_items(items: &[NarrationItem], out: &mut String) {
    for item in items {
        match item {
            NarrationItem::Text(t) => {
                for c in t.text.chars() {
                    if super::parse::is_escapable(c) {
                        out.push('\\');
                    }
                    out.push(c);
                }
            }
            NarrationItem::Command(cmd) => {
                out.push('{');
                for c in cmd.utterance.chars() {
                    if matches!(c, '{' | '}' | '\\') {
                        out.push('\\');
                    }
                    out.push(c);
                }
                out.push('}');
                for (i, block) in cmd.bound_blocks.iter().enumerate() {
                    if let Some(gap) = cmd.layout.get(i) {
                        out.extend(gap.chars().filter(|c| c.is_whitespace()));
                    }
                    out.push('[');
                    write_items(&block.items, out);
                    out.push(']');
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::narration::{parse, NarrationDocument};

    #[test]
    fn empty_doc() {
        assert_eq!(serialize(&NarrationDocument::empty()), "");
    }

    #[test]
    fn escapes_are_restored() {
        let src = r"a \{b\} \\ {c \} d}[x \[y\]]";
        let doc = parse(src).unwrap().doc;
        assert_eq!(serialize(&doc), src);
    }

    #[test]
    fn orphan_brackets_become_escaped() {
        let doc = parse("see [this]").unwrap().doc;
        let out = serialize(&doc);
        assert_eq!(out, r"see \[this\]");
        let again = parse(&out).unwrap();
        assert!(again.warnings.is_empty());
        assert!(again.doc.same_structure(&doc));
    }

    #[test]
    fn trailing_backslash_before_command() {
        let doc = parse(r"a\\{x}").unwrap().doc;
        let out = serialize(&doc);
        assert!(parse(&out).unwrap().doc.same_structure(&doc));
    }
}
