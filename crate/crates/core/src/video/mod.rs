//! The data-video specification: chart, timed narration and animation units.

mod assemble;
mod effects;

pub use assemble::{assemble, default_effect, Assembly};
pub use effects::{Channel, EffectConstants, EffectDescriptor, EffectRegistry};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::interpret::{Behavior, Properties};
use crate::scene::VisualScene;
use crate::timeline::WordTiming;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub command_index: usize,
    pub utterance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnimationUnit {
    pub behavior: Behavior,
    pub effect: String,
    pub start: f64,
    pub duration: f64,
    /// Element or group ids.
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Properties::is_empty")]
    pub properties: Properties,
    pub provenance: Provenance,
    /// Internal steps of a composite unit (the opening preset).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_units: Vec<AnimationUnit>,
}

impl AnimationUnit {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    /// The unit itself, or its steps when it is composite.
    pub fn leaves(&self) -> Vec<&AnimationUnit> {
        if self.sub_units.is_empty() {
            vec![self]
        } else {
            self.sub_units.iter().flat_map(|u| u.leaves()).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Visualization {
    /// Where the chart came from (a path or URL), if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    /// The chart source, embedded so a spec renders on its own.
    pub svg: String,
    pub scene: VisualScene,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Audio {
    /// Opaque handle to synthesized speech, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asset: Option<String>,
    pub words: Vec<WordTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataVideoSpec {
    pub version: u32,
    pub visualization: Visualization,
    pub narration: String,
    pub audio: Audio,
    pub animations: Vec<AnimationUnit>,
}

impl DataVideoSpec {
    /// Narration end or the last animation end, whichever is later.
    pub fn total_duration(&self) -> f64 {
        let speech = self.audio.words.last().map_or(0.0, |w| w.end);
        self.animations
            .iter()
            .map(AnimationUnit::end)
            .fold(speech, f64::max)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("spec serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<DataVideoSpec, Diagnostic> {
        from_json_value(text)
    }
}

/// Deserializes any document, reporting the JSON path of the first problem.
pub fn from_json_value<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Diagnostic> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| schema_violation(&e))?;
    de.end().map_err(|e| {
        Diagnostic::error(Code::SchemaViolation, e.to_string())
            .with_path("$")
            .with_origin(Origin::Spec)
    })?;
    Ok(value)
}

fn schema_violation(e: &serde_path_to_error::Error<serde_json::Error>) -> Diagnostic {
    let inner = e.inner();
    let path = e.path().to_string();
    Diagnostic::error(Code::SchemaViolation, inner.to_string())
        .with_path(if path.is_empty() { "$".to_owned() } else { path })
        .with_origin(Origin::Spec)
}

/// Every invariant of a specification, checked against the default
/// effect library. An empty result means the spec is valid.
pub fn validate(spec: &DataVideoSpec) -> Vec<Diagnostic> {
    validate_with(spec, &EffectRegistry::default())
}

pub fn validate_with(spec: &DataVideoSpec, registry: &EffectRegistry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut err = |code: Code, path: String, message: String| {
        out.push(
            Diagnostic::error(code, message)
                .with_path(path)
                .with_origin(Origin::Spec),
        );
    };

    if spec.version != SPEC_VERSION {
        err(
            Code::SchemaViolation,
            "version".into(),
            format!("unsupported version {}", spec.version),
        );
    }

    let expected: Vec<&str> = spec.narration.split_whitespace().collect();
    if expected.len() != spec.audio.words.len() {
        err(
            Code::AudioMismatch,
            "audio.words".into(),
            format!(
                "{} word timings for {} narration words",
                spec.audio.words.len(),
                expected.len()
            ),
        );
    }
    let mut previous_end = 0.0;
    for (i, w) in spec.audio.words.iter().enumerate() {
        if expected.get(i).is_some_and(|e| *e != w.word) {
            err(
                Code::AudioMismatch,
                format!("audio.words[{i}].word"),
                format!("`{}` does not match narration word `{}`", w.word, expected[i]),
            );
        }
        let ordered = w.start.is_finite() && w.end.is_finite() && w.start >= previous_end && w.start < w.end;
        if !ordered || w.index != i {
            err(
                Code::InvalidWordTiming,
                format!("audio.words[{i}]"),
                format!("word {i} spans {}..{} with index {}", w.start, w.end, w.index),
            );
        }
        previous_end = w.end;
    }

    for (i, pair) in spec.animations.windows(2).enumerate() {
        if pair[1].start < pair[0].start {
            err(
                Code::UnsortedAnimations,
                format!("animations[{}].start", i + 1),
                format!("starts at {} before the previous unit at {}", pair[1].start, pair[0].start),
            );
        }
    }

    let scene = &spec.visualization.scene;
    for (i, unit) in spec.animations.iter().enumerate() {
        check_unit(unit, &format!("animations[{i}]"), None, scene, registry, &mut err);
    }
    out
}

fn check_unit(
    unit: &AnimationUnit,
    path: &str,
    parent: Option<&AnimationUnit>,
    scene: &VisualScene,
    registry: &EffectRegistry,
    err: &mut impl FnMut(Code, String, String),
) {
    if !(unit.start.is_finite() && unit.start >= 0.0) {
        err(Code::NegativeStart, format!("{path}.start"), format!("start {} is negative", unit.start));
    }
    if !(unit.duration.is_finite() && unit.duration > 0.0) {
        err(
            Code::NonPositiveDuration,
            format!("{path}.duration"),
            format!("duration {} is not positive", unit.duration),
        );
    }
    if unit.targets.is_empty() {
        err(Code::EmptyTargets, format!("{path}.targets"), "the unit has no targets".into());
    }
    for (j, id) in unit.targets.iter().enumerate() {
        if !scene.contains_id(id) {
            err(
                Code::DanglingTarget,
                format!("{path}.targets[{j}]"),
                format!("`{id}` is not an element or group of the chart"),
            );
        }
    }
    match registry.get(&unit.effect) {
        None => err(
            Code::UnknownEffect,
            format!("{path}.effect"),
            format!("`{}` is not in the effect library", unit.effect),
        ),
        Some(d) if d.behavior != unit.behavior => err(
            Code::EffectBehaviorMismatch,
            format!("{path}.effect"),
            format!("`{}` is a {} effect, not {}", unit.effect, d.behavior, unit.behavior),
        ),
        Some(_) => {}
    }
    if let Some(p) = parent {
        const SLACK: f64 = 1e-9;
        if unit.start < p.start - SLACK || unit.end() > p.end() + SLACK {
            err(
                Code::SchemaViolation,
                format!("{path}.start"),
                "a step lies outside its parent unit".into(),
            );
        }
    }
    if !unit.sub_units.is_empty() && unit.behavior != Behavior::Opening {
        err(
            Code::SchemaViolation,
            format!("{path}.sub_units"),
            "only opening units have steps".into(),
        );
    }
    for (j, sub) in unit.sub_units.iter().enumerate() {
        if sub.behavior == Behavior::Opening {
            err(
                Code::SchemaViolation,
                format!("{path}.sub_units[{j}].behavior"),
                "an opening step cannot itself be an opening".into(),
            );
            continue;
        }
        check_unit(sub, &format!("{path}.sub_units[{j}]"), Some(unit), scene, registry, err);
    }
}
