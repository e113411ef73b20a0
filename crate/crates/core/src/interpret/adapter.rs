use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};

use super::{interpret, Behavior, CommandIR, ElementFilter, Interpretation};
use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::scene::{ColumnKind, DataValue, PaletteColor, Role, Shape, VisualScene};

/// Pluggable command interpreter.
pub trait InterpreterAdapter: Send + Sync {
    fn name(&self) -> &str;

    /// Adapters that may answer differently for identical input return
    /// false and are kept out of golden comparisons.
    fn deterministic(&self) -> bool {
        true
    }

    fn interpret(&self, utterance: &str, context: &str, scene: &VisualScene) -> Interpretation;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RuleBasedAdapter;

impl InterpreterAdapter for RuleBasedAdapter {
    fn name(&self) -> &str {
        "rule-based"
    }

    fn interpret(&self, utterance: &str, context: &str, scene: &VisualScene) -> Interpretation {
        interpret(utterance, context, scene)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub kind: ColumnKind,
    pub domain: Vec<DataValue>,
}

/// What an external interpreter is told about the chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSummary {
    pub element_count: usize,
    pub columns: BTreeMap<String, ColumnSummary>,
    pub shapes: Vec<Shape>,
    pub roles: Vec<Role>,
    pub colors: Vec<PaletteColor>,
}

impl SceneSummary {
    pub fn of(scene: &VisualScene) -> Self {
        let mut shapes: Vec<Shape> = scene.elements.iter().map(|e| e.shape).collect();
        shapes.sort();
        shapes.dedup();
        let mut roles: Vec<Role> = scene.elements.iter().map(|e| e.role).collect();
        roles.sort();
        roles.dedup();
        let mut colors: Vec<PaletteColor> = scene.marks().map(|e| e.color.term).collect();
        colors.sort();
        colors.dedup();
        Self {
            element_count: scene.elements.len(),
            columns: scene
                .columns
                .iter()
                .map(|(k, c)| {
                    (
                        k.clone(),
                        ColumnSummary {
                            kind: c.kind,
                            domain: c.domain.clone(),
                        },
                    )
                })
                .collect(),
            shapes,
            roles,
            colors,
        }
    }
}

/// Request body sent to external adapters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdapterRequest<'a> {
    pub utterance: &'a str,
    pub context: &'a str,
    pub scene_summary: SceneSummary,
}

/// Runs a program that reads an [`AdapterRequest`] on stdin and prints a
/// [`CommandIR`] on stdout.
#[derive(Debug, Clone)]
pub struct SubprocessAdapter {
    pub program: String,
    pub args: Vec<String>,
    pub deterministic: bool,
}

impl SubprocessAdapter {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            program: program.into(),
            args,
            deterministic: false,
        }
    }

    fn call(&self, body: &[u8]) -> Result<CommandIR, String> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| format!("cannot start `{}`: {e}", self.program))?;
        child
            .stdin
            .take()
            .ok_or("stdin unavailable")?
            .write_all(body)
            .map_err(|e| format!("cannot write request: {e}"))?;
        let output = child
            .wait_with_output()
            .map_err(|e| format!("adapter did not finish: {e}"))?;
        if !output.status.success() {
            return Err(format!(
                "adapter exited with {}: {}",
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            ));
        }
        serde_json::from_slice(&output.stdout).map_err(|e| format!("adapter reply is not a command: {e}"))
    }
}

impl InterpreterAdapter for SubprocessAdapter {
    fn name(&self) -> &str {
        "subprocess"
    }

    fn deterministic(&self) -> bool {
        self.deterministic
    }

    fn interpret(&self, utterance: &str, context: &str, scene: &VisualScene) -> Interpretation {
        let request = AdapterRequest {
            utterance,
            context,
            scene_summary: SceneSummary::of(scene),
        };
        let body = serde_json::to_vec(&request).expect("request serializes");
        adapter_result(self.call(&body), utterance)
    }
}

/// Wraps an external adapter's answer; failures become an error diagnostic
/// with a neutral fallback command.
pub fn adapter_result(result: Result<CommandIR, String>, utterance: &str) -> Interpretation {
    match result {
        Ok(ir) => Interpretation {
            ir,
            diagnostics: Vec::new(),
        },
        Err(message) => {
            let mut ir = CommandIR::new(Behavior::Emphasis);
            ir.filters.push(ElementFilter::All);
            Interpretation {
                ir,
                diagnostics: vec![Diagnostic::error(Code::AdapterFailure, message)
                    .with_span(crate::SourceSpan::new(0, utterance.chars().count()))
                    .with_origin(Origin::Utterance)],
            }
        }
    }
}

/// `rule-based`, or `subprocess:<program> [args…]`.
pub fn adapter_by_name(name: &str) -> Option<Box<dyn InterpreterAdapter>> {
    match name.trim() {
        "" | "rule-based" | "rules" => Some(Box::new(RuleBasedAdapter)),
        other => {
            let command = other.strip_prefix("subprocess:")?;
            let mut parts = command.split_whitespace();
            let program = parts.next()?;
            Some(Box::new(SubprocessAdapter::new(
                program,
                parts.map(str::to_owned).collect(),
            )))
        }
    }
}
