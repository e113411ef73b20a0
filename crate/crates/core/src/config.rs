//! Optional TOML configuration for the timing model, effect constants and
//! interpreter choice.
//!
//! ```toml
//! adapter = "rule-based"
//!
//! [timing]
//! base_word_seconds = 0.18
//! per_char_seconds = 0.06
//! inter_word_gap = 0.05
//! sentence_pause = 0.30
//!
//! [effects]
//! dim_opacity = 0.15
//! entrance_duration = 1.0
//! ```
//!
//! Every key is optional; missing keys keep their defaults.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::timeline::TimingModel;
use crate::video::EffectConstants;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Interpreter adapter name (`rule-based` or `subprocess:<command>`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adapter: Option<String>,
    pub timing: TimingModel,
    pub effects: EffectConstants,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, Diagnostic> {
        let config: Config = toml::from_str(text).map_err(|e| {
            let mut d = Diagnostic::error(Code::SchemaViolation, e.message().to_owned()).with_origin(Origin::Request);
            if let Some(range) = e.span() {
                let start = text[..range.start].chars().count();
                let len = text[range.clone()].chars().count();
                d = d.with_span(crate::SourceSpan::new(start, start + len));
            }
            d
        })?;
        match config.validate().into_iter().next() {
            Some(d) => Err(d),
            None => Ok(config),
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = self.timing.validate();
        for field in self.effects.invalid_fields() {
            out.push(
                Diagnostic::error(Code::SchemaViolation, format!("effect constant `{field}` is out of range"))
                    .with_path(format!("effects.{field}"))
                    .with_origin(Origin::Request),
            );
        }
        out
    }
}
