//! The whole compiler: chart plus annotated narration in, spec and schedule out.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{has_errors, Code, Diagnostic, Origin};
use crate::interpret::{InterpreterAdapter, RuleBasedAdapter};
use crate::narration::{parse, plain_narration};
use crate::render::{compile_schedule_with, KeyframeSchedule};
use crate::scene::ingest_svg;
use crate::timeline::{compute_word_timings, external_timings, resolve_nested, TimingModel};
use crate::video::{assemble, validate_with, DataVideoSpec, EffectConstants, EffectRegistry};

/// Largest SVG accepted, in bytes.
pub const MAX_SVG_BYTES: usize = 5 * 1024 * 1024;

static RULES: RuleBasedAdapter = RuleBasedAdapter;

pub struct CompileOptions<'a> {
    pub timing: TimingModel,
    /// `[{word, start, end}]` from a speech service, replacing the model.
    pub timings_json: Option<String>,
    pub effects: EffectConstants,
    pub adapter: &'a dyn InterpreterAdapter,
    /// Recorded in the spec as the chart's origin.
    pub svg_reference: Option<String>,
}

impl Default for CompileOptions<'_> {
    fn default() -> Self {
        Self {
            timing: TimingModel::default(),
            timings_json: None,
            effects: EffectConstants::default(),
            adapter: &RULES,
            svg_reference: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub total_duration: f64,
    pub unit_count: usize,
}

#[derive(Debug, Clone)]
pub struct CompileOutput {
    /// Absent when the inputs could not be read at all.
    pub spec: Option<DataVideoSpec>,
    pub schedule: Option<KeyframeSchedule>,
    /// In pipeline order: narration, chart, timings, interpretation,
    /// assembly, scheduling.
    pub diagnostics: Vec<Diagnostic>,
}

impl CompileOutput {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }

    pub fn summary(&self) -> Option<ScheduleSummary> {
        let spec = self.spec.as_ref()?;
        Some(ScheduleSummary {
            total_duration: self.schedule.as_ref().map_or(spec.total_duration(), |s| s.total_duration),
            unit_count: spec.animations.len(),
        })
    }

    fn failed(diagnostics: Vec<Diagnostic>) -> Self {
        Self {
            spec: None,
            schedule: None,
            diagnostics,
        }
    }
}

pub fn compile(svg: &str, annotated: &str, opts: &CompileOptions) -> CompileOutput {
    if svg.len() > MAX_SVG_BYTES {
        return CompileOutput::failed(vec![Diagnostic::error(
            Code::SvgTooLarge,
            format!("the chart is {} bytes; the limit is {MAX_SVG_BYTES}", svg.len()),
        )
        .with_origin(Origin::Svg)]);
    }
    let mut diagnostics = opts.timing.validate();
    for field in opts.effects.invalid_fields() {
        diagnostics.push(
            Diagnostic::error(Code::SchemaViolation, format!("effect constant `{field}` is out of range"))
                .with_path(format!("effects.{field}"))
                .with_origin(Origin::Request),
        );
    }
    if !diagnostics.is_empty() {
        return CompileOutput::failed(diagnostics);
    }

    let parsed = parse(annotated);
    let svg_result = ingest_svg(svg);
    let (doc, ingested) = match (parsed, svg_result) {
        (Ok(p), Ok(i)) => {
            diagnostics.extend(p.warnings);
            diagnostics.extend(i.warnings.iter().cloned());
            (p.doc, i)
        }
        (p, i) => {
            match p {
                Ok(p) => diagnostics.extend(p.warnings),
                Err(e) => diagnostics.extend(e),
            }
            match i {
                Ok(i) => diagnostics.extend(i.warnings),
                Err(e) => diagnostics.extend(e),
            }
            return CompileOutput::failed(diagnostics);
        }
    };
    let scene = ingested.scene;

    let plain = plain_narration(&doc);
    let timings = match &opts.timings_json {
        Some(json) => match external_timings(json, &plain) {
            Ok(t) => t,
            Err(e) => {
                diagnostics.extend(e);
                return CompileOutput::failed(diagnostics);
            }
        },
        None => compute_word_timings(&plain, &opts.timing),
    };

    let resolved = resolve_nested(&doc, &timings, &scene, opts.adapter);
    diagnostics.extend(resolved.diagnostics);
    let assembly = assemble(&scene, &doc, &timings, &resolved.commands, &opts.effects);
    diagnostics.extend(assembly.diagnostics);
    let mut spec = assembly.spec;
    spec.visualization.reference = opts.svg_reference.clone();
    diagnostics.extend(validate_with(&spec, &EffectRegistry::new(&opts.effects)));

    let compiled = compile_schedule_with(&spec, &scene, &opts.effects);
    diagnostics.extend(compiled.diagnostics);
    CompileOutput {
        spec: Some(spec),
        schedule: Some(compiled.schedule),
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SVG: &str = r#"<svg width="100" height="100">
      <rect class="mark" data-field-Year="2001" x="0" y="50" width="10" height="50"/>
      <rect class="mark" data-field-Year="2002" x="20" y="30" width="10" height="70"/>
    </svg>"#;

    #[test]
    fn end_to_end() {
        let out = compile(SVG, "{grow in the bars}[Two good years.] {shine 2002} Yes.", &CompileOptions::default());
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        let summary = out.summary().unwrap();
        assert_eq!(summary.unit_count, 2);
        assert!(summary.total_duration >= 2.0);
    }

    #[test]
    fn parse_errors_stop_early() {
        let out = compile(SVG, "{grow in the bars", &CompileOptions::default());
        assert!(out.spec.is_none());
        assert_eq!(out.diagnostics[0].code, Code::UnbalancedBrace);
        assert!(out.diagnostics[0].span.is_some());
    }

    #[test]
    fn oversized_chart() {
        let big = format!("<svg>{}</svg>", " ".repeat(MAX_SVG_BYTES));
        let out = compile(&big, "hello", &CompileOptions::default());
        assert_eq!(out.diagnostics[0].code, Code::SvgTooLarge);
    }

    #[test]
    fn external_timings_replace_model() {
        let opts = CompileOptions {
            timings_json: Some(r#"[{"word":"Hello","start":0.5,"end":1.0}]"#.into()),
            ..CompileOptions::default()
        };
        let out = compile(SVG, "{grow in the bars} Hello", &opts);
        assert_eq!(out.spec.unwrap().animations[0].start, 0.5);
    }
}
