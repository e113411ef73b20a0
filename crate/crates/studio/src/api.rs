//! Request handling shared by the CLI and the HTTP server. Every handler is
//! a pure function from a request body to a [`Reply`].

use serde::{Deserialize, Serialize};

use reelscript_core::config::Config;
use reelscript_core::interpret::{adapter_by_name, InterpreterAdapter};
use reelscript_core::pipeline::{self, CompileOptions, ScheduleSummary};
use reelscript_core::render::{compile_schedule_with, emit_html, sample_frame, FrameState, KeyframeSchedule};
use reelscript_core::timeline::TimingModel;
use reelscript_core::video::{from_json_value, validate_with, DataVideoSpec, EffectRegistry};
use reelscript_core::{Code, Diagnostic, Origin, Severity};

/// Optional per-request changes to the timing model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_word_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_char_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inter_word_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_pause: Option<f64>,
}

impl TimingOverrides {
    pub fn apply(&self, base: TimingModel) -> TimingModel {
        TimingModel {
            base_word_seconds: self.base_word_seconds.unwrap_or(base.base_word_seconds),
            per_char_seconds: self.per_char_seconds.unwrap_or(base.per_char_seconds),
            inter_word_gap: self.inter_word_gap.unwrap_or(base.inter_word_gap),
            sentence_pause: self.sentence_pause.unwrap_or(base.sentence_pause),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompileRequest {
    pub svg: String,
    pub annotated_narration: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_model: Option<TimingOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapter: Option<String>,
    /// `[{word, start, end}]` from a speech service.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_timings: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_reference: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompileResponse {
    pub spec: Option<DataVideoSpec>,
    pub schedule_summary: Option<ScheduleSummary>,
    /// Full keyframe schedule, so clients can interpolate locally.
    pub schedule: Option<KeyframeSchedule>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRequest {
    pub spec: DataVideoSpec,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize)]
struct DiagnosticsBody<'a> {
    diagnostics: &'a [Diagnostic],
}

#[derive(Debug, Clone, Serialize)]
struct ValidateBody<'a> {
    valid: bool,
    diagnostics: &'a [Diagnostic],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub status: u16,
    pub content_type: &'static str,
    pub body: String,
}

const JSON: &str = "application/json";
const HTML: &str = "text/html; charset=utf-8";

fn json<T: Serialize>(status: u16, value: &T) -> Reply {
    Reply {
        status,
        content_type: JSON,
        body: serde_json::to_string(value).expect("response serializes"),
    }
}

fn diagnostics(status: u16, diags: &[Diagnostic]) -> Reply {
    json(status, &DiagnosticsBody { diagnostics: diags })
}

fn schema_error(path: &str, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::SchemaViolation, message)
        .with_path(path)
        .with_origin(Origin::Request)
}

fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Resolves an adapter name. Over HTTP only the built-in interpreter and
/// the one named in the server configuration may be chosen.
pub fn adapter_for(
    requested: Option<&str>,
    config: &Config,
    allow_any: bool,
) -> Result<Box<dyn InterpreterAdapter>, Diagnostic> {
    let name = requested.or(config.adapter.as_deref()).unwrap_or("rule-based");
    let builtin = matches!(name.trim(), "" | "rule-based" | "rules");
    if !(allow_any || builtin || config.adapter.as_deref() == Some(name)) {
        return Err(schema_error("adapter", format!("adapter `{name}` is not enabled on this server")));
    }
    adapter_by_name(name).ok_or_else(|| schema_error("adapter", format!("unknown adapter `{name}`")))
}

/// The compile step behind both `reelscript compile` and `POST /compile`.
pub fn run_compile(
    config: &Config,
    request: &CompileRequest,
    adapter: &dyn InterpreterAdapter,
) -> CompileResponse {
    let options = CompileOptions {
        timing: request.timing_model.unwrap_or_default().apply(config.timing),
        timings_json: request.word_timings.as_ref().map(|v| v.to_string()),
        effects: config.effects,
        adapter,
        svg_reference: request.svg_reference.clone(),
    };
    let out = pipeline::compile(&request.svg, &request.annotated_narration, &options);
    CompileResponse {
        schedule_summary: out.summary(),
        spec: out.spec,
        schedule: out.schedule,
        diagnostics: out.diagnostics,
    }
}

pub fn compile(config: &Config, body: &str) -> Reply {
    let request: CompileRequest = match from_json_value(body) {
        Ok(r) => r,
        Err(d) => return diagnostics(400, &[d]),
    };
    let mut problems = Vec::new();
    if request.svg.trim().is_empty() {
        problems.push(schema_error("svg", "the chart is empty"));
    }
    if request.annotated_narration.trim().is_empty() {
        problems.push(schema_error("annotated_narration", "the narration is empty"));
    }
    problems.extend(request.timing_model.unwrap_or_default().apply(config.timing).validate());
    if !problems.is_empty() {
        return diagnostics(400, &problems);
    }
    let adapter = match adapter_for(request.adapter.as_deref(), config, false) {
        Ok(a) => a,
        Err(d) => return diagnostics(400, &[d]),
    };
    let response = run_compile(config, &request, adapter.as_ref());
    let status = if has_errors(&response.diagnostics) { 422 } else { 200 };
    json(status, &response)
}

fn parse_spec(body: &str) -> Result<DataVideoSpec, Reply> {
    DataVideoSpec::from_json(body).map_err(|d| diagnostics(400, &[d]))
}

/// Schedule for a stored spec, after checking it.
pub fn schedule_for(config: &Config, spec: &DataVideoSpec) -> Result<KeyframeSchedule, Vec<Diagnostic>> {
    let diags = validate_with(spec, &EffectRegistry::new(&config.effects));
    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(compile_schedule_with(spec, &spec.visualization.scene, &config.effects).schedule)
}

/// The page behind both `reelscript render --format html` and `POST /render`.
pub fn render_spec(config: &Config, spec: &DataVideoSpec) -> Result<String, Vec<Diagnostic>> {
    let schedule = schedule_for(config, spec)?;
    Ok(emit_html(spec, &schedule, &spec.visualization.scene))
}

pub fn render(config: &Config, body: &str) -> Reply {
    let spec = match parse_spec(body) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match render_spec(config, &spec) {
        Ok(page) => Reply {
            status: 200,
            content_type: HTML,
            body: page,
        },
        Err(d) => diagnostics(422, &d),
    }
}

pub fn frames(config: &Config, spec: &DataVideoSpec, times: &[f64]) -> Result<Vec<FrameState>, Vec<Diagnostic>> {
    let schedule = schedule_for(config, spec)?;
    times
        .iter()
        .map(|&t| sample_frame(&schedule, t).map_err(|d| vec![d.with_path("t")]))
        .collect()
}

pub fn frame(config: &Config, body: &str) -> Reply {
    let request: FrameRequest = match from_json_value(body) {
        Ok(r) => r,
        Err(d) => return diagnostics(400, &[d]),
    };
    match frames(config, &request.spec, &[request.t]) {
        Ok(mut states) => json(200, &states.remove(0)),
        Err(d) if d.iter().any(|d| d.code == Code::OutOfRangeTime) => diagnostics(400, &d),
        Err(d) => diagnostics(422, &d),
    }
}

pub fn validate(config: &Config, body: &str) -> Reply {
    let spec = match parse_spec(body) {
        Ok(s) => s,
        Err(r) => return r,
    };
    let diags = validate_with(&spec, &EffectRegistry::new(&config.effects));
    json(
        200,
        &ValidateBody {
            valid: !has_errors(&diags),
            diagnostics: &diags,
        },
    )
}

pub fn effects(config: &Config) -> Reply {
    json(200, &EffectRegistry::new(&config.effects))
}

pub fn health() -> Reply {
    json(
        200,
        &serde_json::json!({"status": "ok", "version": env!("CARGO_PKG_VERSION")}),
    )
}
