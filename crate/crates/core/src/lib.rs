//! Compiles an SVG chart plus annotated narration into a declarative data
//! video: word-timed narration, animation units, a keyframe schedule and a
//! self-contained animated HTML document.
//!
//! The stages are exposed individually so tools can stop anywhere:
//!
//! * [`narration`] parses `{command}[segment]` annotations.
//! * [`scene`] ingests an SVG into typed, queryable elements.
//! * [`interpret`] turns one command into filters, behavior and effect.
//! * [`timeline`] places commands on the word timeline.
//! * [`video`] assembles and validates the [`video::DataVideoSpec`].
//! * [`render`] compiles keyframe tracks, samples frames and emits HTML.
//! * [`pipeline`] chains all of the above.

pub mod config;
pub mod diagnostics;
pub mod interpret;
pub mod narration;
pub mod pipeline;
pub mod render;
pub mod scene;
pub mod timeline;
pub mod video;

pub use diagnostics::{Code, Diagnostic, DiagnosticList, Origin, Severity, SourceSpan};
