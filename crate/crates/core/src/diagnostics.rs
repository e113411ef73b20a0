//! Structured diagnostics shared by every compiler stage.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-open character range into a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

/// Which input a diagnostic span points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Narration,
    Utterance,
    Svg,
    Spec,
    Timings,
    Request,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Code {
    // narration grammar
    UnbalancedBrace,
    UnbalancedBracket,
    OrphanBlock,
    NestedCommand,
    EmptyBlock,
    EmptyCommand,
    NestingTooDeep,
    // scene ingestion
    MalformedSvg,
    DuplicateElementId,
    UnknownRoleToken,
    UnclassifiableShape,
    UnparsableColor,
    SvgTooLarge,
    // interpretation
    EmptyUtterance,
    NoBehaviorDetected,
    UnknownModifier,
    NegationWithoutContext,
    CategoricalRange,
    EmptyTargetSet,
    PositionOutOfRange,
    GroupCollapsed,
    TargetDropped,
    AdapterFailure,
    // timeline
    CommandInEmptyNarration,
    TimingsMismatch,
    // specification
    DanglingTarget,
    NoPreviousUnitToReuse,
    NonPositiveDuration,
    NegativeStart,
    EmptyTargets,
    UnknownEffect,
    EffectBehaviorMismatch,
    AudioMismatch,
    InvalidWordTiming,
    UnsortedAnimations,
    MissingVisualization,
    SchemaViolation,
    // schedule
    ConflictOverridden,
    OutOfRangeTime,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<SourceSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
    /// JSON path for diagnostics raised against a serialized document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Diagnostic {
    pub fn new(code: Code, severity: Severity, message: impl Into<String>) -> Self {
        Self {
            code,
            severity,
            message: message.into(),
            span: None,
            origin: None,
            path: None,
        }
    }

    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Error, message)
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Warning, message)
    }

    pub fn note(code: Code, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Note, message)
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn with_path(mut self, path: impl Into<String>) -> Self {
        self.path = Some(path.into());
        self
    }

    /// Re-anchors a span given relative to an inner text (e.g. an utterance)
    /// onto an enclosing span of the outer source.
    pub fn relocate(mut self, outer: SourceSpan, origin: Origin) -> Self {
        self.span = Some(outer);
        self.origin = Some(origin);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)?;
        if let Some(span) = self.span {
            write!(f, " at {}..{}", span.start, span.end)?;
        }
        if let Some(path) = &self.path {
            write!(f, " ({path})")?;
        }
        Ok(())
    }
}

pub type DiagnosticList = Vec<Diagnostic>;

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
