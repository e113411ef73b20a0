//! Word timings and command placement on the narration timeline.

mod anchor;

pub use anchor::{anchor_commands, expand_parallel, resolve_nested, Anchor, AnchoredCommand, Resolved};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Code, Diagnostic, Origin};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordTiming {
    pub word: String,
    pub start: f64,
    pub end: f64,
    pub index: usize,
}

/// Deterministic speech-duration model standing in for a TTS service.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingModel {
    pub base_word_seconds: f64,
    pub per_char_seconds: f64,
    pub inter_word_gap: f64,
    /// Extra pause after a word ending in `.`, `!`, `?` or `;`.
    pub sentence_pause: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        Self {
            base_word_seconds: 0.18,
            per_char_seconds: 0.06,
            inter_word_gap: 0.05,
            sentence_pause: 0.30,
        }
    }
}

impl TimingModel {
    pub fn validate(&self) -> Vec<Diagnostic> {
        let fields = [
            ("base_word_seconds", self.base_word_seconds),
            ("per_char_seconds", self.per_char_seconds),
            ("inter_word_gap", self.inter_word_gap),
            ("sentence_pause", self.sentence_pause),
        ];
        fields
            .iter()
            .filter(|(_, v)| !(v.is_finite() && *v > 0.0 && *v < 3600.0))
            .map(|(name, v)| {
                Diagnostic::error(
                    Code::SchemaViolation,
                    format!("timing parameter `{name}` must be positive, got {v}"),
                )
                .with_path(format!("timing_model.{name}"))
                .with_origin(Origin::Request)
            })
            .collect()
    }
}

/// Timestamps are kept on a microsecond grid so repeated runs and
/// re-derivations agree bit for bit.
const TICKS_PER_SECOND: f64 = 1_000_000.0;

fn ticks(seconds: f64) -> i64 {
    (seconds * TICKS_PER_SECOND).round() as i64
}

fn seconds(ticks: i64) -> f64 {
    ticks as f64 / TICKS_PER_SECOND
}

/// Rounds a time to the timeline grid.
pub fn snap(t: f64) -> f64 {
    seconds(ticks(t))
}

pub fn visible_chars(word: &str) -> usize {
    word.chars().filter(|c| c.is_alphanumeric()).count()
}

pub fn ends_sentence(word: &str) -> bool {
    let trimmed = word.trim_end_matches(['"', '\'', ')', '\u{201d}', '\u{2019}']);
    trimmed.ends_with(['.', '!', '?', ';'])
}

pub fn compute_word_timings(plain: &str, model: &TimingModel) -> Vec<WordTiming> {
    let base = ticks(model.base_word_seconds);
    let per_char = ticks(model.per_char_seconds);
    let gap = ticks(model.inter_word_gap);
    let pause = ticks(model.sentence_pause);
    let mut t = 0i64;
    plain
        .split_whitespace()
        .enumerate()
        .map(|(index, word)| {
            let start = t;
            let end = start + base + per_char * visible_chars(word) as i64;
            t = end + gap + if ends_sentence(word) { pause } else { 0 };
            WordTiming {
                word: word.to_owned(),
                start: seconds(start),
                end: seconds(end),
                index,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
struct ExternalWord {
    word: String,
    start: f64,
    end: f64,
}

fn normalize(word: &str) -> String {
    word.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Reads `[{word, start, end}]` supplied by a speech service and checks it
/// against the plain narration word by word (case and punctuation are
/// ignored).
pub fn external_timings(json: &str, plain: &str) -> Result<Vec<WordTiming>, Vec<Diagnostic>> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let words: Vec<ExternalWord> = serde_path_to_error::deserialize(de).map_err(|e| {
        vec![Diagnostic::error(Code::SchemaViolation, e.inner().to_string())
            .with_path(e.path().to_string())
            .with_origin(Origin::Timings)]
    })?;
    let expected: Vec<&str> = plain.split_whitespace().collect();
    let mut diags = Vec::new();
    if words.len() != expected.len() {
        diags.push(
            Diagnostic::error(
                Code::TimingsMismatch,
                format!(
                    "timings list {} words but the narration has {}",
                    words.len(),
                    expected.len()
                ),
            )
            .with_origin(Origin::Timings),
        );
    }
    let mut previous_end = 0.0;
    for (i, (w, e)) in words.iter().zip(&expected).enumerate() {
        if normalize(&w.word) != normalize(e) {
            diags.push(
                Diagnostic::error(
                    Code::TimingsMismatch,
                    format!("word {i} is `{}` in the timings but `{e}` in the narration", w.word),
                )
                .with_path(format!("[{i}].word"))
                .with_origin(Origin::Timings),
            );
        }
        if !(w.start.is_finite() && w.end.is_finite() && w.start >= previous_end && w.start < w.end) {
            diags.push(
                Diagnostic::error(
                    Code::InvalidWordTiming,
                    format!("word {i} has start {} and end {}", w.start, w.end),
                )
                .with_path(format!("[{i}]"))
                .with_origin(Origin::Timings),
            );
        }
        previous_end = w.end;
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(words
        .into_iter()
        .enumerate()
        .map(|(index, w)| WordTiming {
            word: expected[index].to_owned(),
            start: snap(w.start),
            end: snap(w.end),
            index,
        })
        .collect())
}

/// Source of word timings: the built-in model or an external service.
pub trait TtsAdapter {
    fn word_timings(&self, plain: &str) -> Result<Vec<WordTiming>, Vec<Diagnostic>>;
}

impl TtsAdapter for TimingModel {
    fn word_timings(&self, plain: &str) -> Result<Vec<WordTiming>, Vec<Diagnostic>> {
        let errors = self.validate();
        if errors.is_empty() {
            Ok(compute_word_timings(plain, self))
        } else {
            Err(errors)
        }
    }
}

/// Timings read from a JSON document produced elsewhere.
#[derive(Debug, Clone)]
pub struct FileTimings(pub String);

impl TtsAdapter for FileTimings {
    fn word_timings(&self, plain: &str) -> Result<Vec<WordTiming>, Vec<Diagnostic>> {
        external_timings(&self.0, plain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(plain: &str) -> Vec<(String, f64, f64)> {
        compute_word_timings(plain, &TimingModel::default())
            .into_iter()
            .map(|w| (w.word, w.start, w.end))
            .collect()
    }

    #[test]
    fn two_words() {
        assert_eq!(
            spans("Air travel"),
            vec![("Air".into(), 0.0, 0.36), ("travel".into(), 0.41, 0.95)]
        );
    }

    #[test]
    fn sentence_pause() {
        assert_eq!(
            spans("Hi. Go"),
            vec![("Hi.".into(), 0.0, 0.30), ("Go".into(), 0.65, 0.95)]
        );
    }

    #[test]
    fn empty() {
        assert!(spans("").is_empty());
    }

    #[test]
    fn model_must_be_positive() {
        let m = TimingModel {
            inter_word_gap: 0.0,
            ..TimingModel::default()
        };
        assert_eq!(m.validate()[0].path.as_deref(), Some("timing_model.inter_word_gap"));
    }

    #[test]
    fn external_mismatch() {
        let ok = external_timings(r#"[{"word":"air","start":0,"end":0.3},{"word":"Travel.","start":0.4,"end":0.9}]"#, "Air travel");
        assert_eq!(ok.unwrap()[1].word, "travel");
        let bad = external_timings(r#"[{"word":"air","start":0,"end":0.3}]"#, "Air travel").unwrap_err();
        assert_eq!(bad[0].code, Code::TimingsMismatch);
        let bad = external_timings(r#"[{"word":"air","start":0.5,"end":0.3}]"#, "Air").unwrap_err();
        assert_eq!(bad[0].code, Code::InvalidWordTiming);
        let bad = external_timings(r#"[{"word":"air","start":"x","end":0.3}]"#, "Air").unwrap_err();
        assert_eq!(bad[0].code, Code::SchemaViolation);
        assert_eq!(bad[0].path.as_deref(), Some("[0].start"));
    }
}
