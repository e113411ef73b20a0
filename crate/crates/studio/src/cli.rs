//! The `reelscript` command line.

use std::fs;
use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use reelscript_core::config::Config;
use reelscript_core::narration::{parse, plain_narration};
use reelscript_core::render::emit_html;
use reelscript_core::scene::ingest_svg;
use reelscript_core::timeline::compute_word_timings;
use reelscript_core::video::{validate_with, DataVideoSpec, EffectRegistry};
use reelscript_core::{Diagnostic, Origin, Severity};

use crate::api::{self, CompileRequest, TimingOverrides};
use crate::server;

pub const EXIT_OK: u8 = 0;
pub const EXIT_DIAGNOSTICS: u8 = 1;
pub const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "reelscript", version, about = "Compile SVG charts and annotated narration into data videos")]
pub struct Cli {
    /// TOML file with timing, effect and adapter settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a chart and narration into a specification.
    Compile(CompileArgs),
    /// Turn a specification into an HTML page or sampled frames.
    Render(RenderArgs),
    /// Check a specification and list its problems.
    Validate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json_diagnostics: bool,
    },
    /// Print modeled word timings for a narration.
    Timings {
        #[arg(long)]
        narration: PathBuf,
        #[command(flatten)]
        timing: TimingArgs,
    },
    /// Print the scene extracted from an SVG chart.
    InspectSvg {
        #[arg(long)]
        svg: PathBuf,
    },
    /// Interpret one command against a chart and print the result.
    Interpret {
        #[arg(long)]
        svg: PathBuf,
        /// Narration text the command applies to.
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        adapter: Option<String>,
        utterance: String,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "REELSCRIPT_PORT", default_value_t = server::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

#[derive(Debug, Args, Default)]
pub struct TimingArgs {
    #[arg(long)]
    pub timing_base_word_seconds: Option<f64>,
    #[arg(long)]
    pub timing_per_char_seconds: Option<f64>,
    #[arg(long)]
    pub timing_inter_word_gap: Option<f64>,
    #[arg(long)]
    pub timing_sentence_pause: Option<f64>,
}

impl TimingArgs {
    fn overrides(&self) -> TimingOverrides {
        TimingOverrides {
            base_word_seconds: self.timing_base_word_seconds,
            per_char_seconds: self.timing_per_char_seconds,
            inter_word_gap: self.timing_inter_word_gap,
            sentence_pause: self.timing_sentence_pause,
        }
    }
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[arg(long)]
    pub svg: PathBuf,
    /// Annotated narration.
    #[arg(long)]
    pub narration: PathBuf,
    #[arg(long, default_value = "spec.json")]
    pub out: PathBuf,
    /// Also write the keyframe schedule (default: schedule.json beside the spec).
    #[arg(long, num_args = 0..=1)]
    pub schedule: Option<Option<PathBuf>>,
    /// Also write the animated HTML page.
    #[arg(long)]
    pub html: Option<PathBuf>,
    /// `[{word, start, end}]` from a speech service.
    #[arg(long)]
    pub timings: Option<PathBuf>,
    #[arg(long)]
    pub adapter: Option<String>,
    #[arg(long)]
    pub quiet: bool,
    /// Print diagnostics as JSON on stdout.
    #[arg(long)]
    pub json_diagnostics: bool,
    #[command(flatten)]
    pub timing: TimingArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Html,
    Frames,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Replace the embedded chart with this one.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Html)]
    pub format: Format,
    /// Frame times in seconds (comma separated) for `--format frames`.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
    /// Frames per second when no times are given.
    #[arg(long, default_value_t = 1.0)]
    pub fps: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Failure(u8);

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        Failure(EXIT_IO)
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        Failure(EXIT_IO)
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => io::stdout().write_all(text.as_bytes()).map_err(|_| Failure(EXIT_IO)),
    }
}

/// One-based line and column of a character offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars().take(offset) {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Sources that diagnostic spans may point into, by origin.
#[derive(Default)]
pub struct Sources<'a> {
    pub files: Vec<(Origin, &'a Path, &'a str)>,
}

impl Sources<'_> {
    pub fn format(&self, d: &Diagnostic) -> String {
        let sev = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        };
        let source = d.origin.and_then(|o| self.files.iter().find(|(origin, ..)| *origin == o));
        let location = match (d.span, source) {
            (Some(span), Some((_, path, text))) => {
                let (line, col) = line_col(text, span.start);
                format!("{}:{line}:{col}: ", path.display())
            }
            (Some(span), None) => format!("{}..{}: ", span.start, span.end),
            (None, Some((_, path, _))) => format!("{}: ", path.display()),
            (None, None) => String::new(),
        };
        let path = d.path.as_ref().map(|p| format!(" (at {p})")).unwrap_or_default();
        format!("{location}{sev}[{}]: {}{path}", d.code, d.message)
    }
}

fn report(diags: &[Diagnostic], sources: &Sources, json: bool, quiet: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(diags).expect("diagnostics serialize"));
        return;
    }
    for d in diags {
        if quiet && d.severity != Severity::Error {
            continue;
        }
        eprintln!("{}", sources.format(d));
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = read(path)?;
    Config::from_toml(&text).map_err(|d| {
        let sources = Sources {
            files: vec![(Origin::Request, path, &text)],
        };
        eprintln!("{}", sources.format(&d));
        Failure(EXIT_IO)
    })
}

fn compile(config: &Config, args: &CompileArgs) -> Outcome {
    let svg = read(&args.svg)?;
    let narration = read(&args.narration)?;
    let timings_text = args.timings.as_deref().map(read).transpose()?;
    let word_timings = match &timings_text {
        Some(text) => Some(serde_json::from_str(text).map_err(|e| {
            eprintln!("error: {} is not JSON: {e}", args.timings.as_ref().unwrap().display());
            Failure(EXIT_IO)
        })?),
        None => None,
    };
    let adapter = api::adapter_for(args.adapter.as_deref(), config, true).map_err(|d| {
        eprintln!("{d}");
        Failure(EXIT_IO)
    })?;
    let request = CompileRequest {
        svg,
        annotated_narration: narration,
        timing_model: Some(args.timing.overrides()),
        adapter: None,
        word_timings,
        svg_reference: Some(args.svg.display().to_string()),
    };
    let response = api::run_compile(config, &request, adapter.as_ref());

    let mut sources = Sources {
        files: vec![
            (Origin::Narration, &args.narration, &request.annotated_narration),
            (Origin::Svg, &args.svg, &request.svg),
        ],
    };
    if let (Some(path), Some(text)) = (&args.timings, &timings_text) {
        sources.files.push((Origin::Timings, path, text));
    }
    report(&response.diagnostics, &sources, args.json_diagnostics, args.quiet);

    if response.diagnostics.iter().any(Diagnostic::is_error) {
        return Ok(EXIT_DIAGNOSTICS);
    }
    let (Some(spec), Some(schedule)) = (&response.spec, &response.schedule) else {
        return Ok(EXIT_DIAGNOSTICS);
    };
    write(&args.out, &spec.to_json())?;
    if let Some(target) = &args.schedule {
        let path = target
            .clone()
            .unwrap_or_else(|| args.out.with_file_name("schedule.json"));
        write(&path, &schedule.to_json())?;
    }
    if let Some(path) = &args.html {
        write(path, &emit_html(spec, schedule, &spec.visualization.scene))?;
    }
    if !args.quiet && !args.json_diagnostics {
        if let Some(s) = response.schedule_summary {
            eprintln!(
                "wrote {} ({} units, {:.2} s)",
                args.out.display(),
                s.unit_count,
                s.total_duration
            );
        }
    }
    Ok(EXIT_OK)
}

fn load_spec(path: &Path) -> Result<(DataVideoSpec, String), Failure> {
    let text = read(path)?;
    match DataVideoSpec::from_json(&text) {
        Ok(spec) => Ok((spec, text)),
        Err(d) => {
            eprintln!("{}: {}", path.display(), d);
            Err(Failure(EXIT_DIAGNOSTICS))
        }
    }
}

fn frame_times(args: &RenderArgs, total: f64) -> Vec<f64> {
    if !args.at.is_empty() {
        return args.at.clone();
    }
    let step = 1.0 / args.fps.max(1e-3);
    let count = (total / step).floor() as usize;
    let mut times: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    if times.last().is_some_and(|&t| t < total) {
        times.push(total);
    }
    times
}

fn render(config: &Config, args: &RenderArgs) -> Outcome {
    let (mut spec, _) = load_spec(&args.spec)?;
    if let Some(path) = &args.svg {
        let text = read(path)?;
        match ingest_svg(&text) {
            Ok(ingested) => {
                spec.visualization.svg = text.clone();
                spec.visualization.scene = ingested.scene;
                spec.visualization.reference = Some(path.display().to_string());
            }
            Err(diags) => {
                let sources = Sources {
                    files: vec![(Origin::Svg, path, &text)],
                };
                report(&diags, &sources, false, false);
                return Ok(EXIT_DIAGNOSTICS);
            }
        }
    }
    let result = match args.format {
        Format::Html => api::render_spec(config, &spec),
        Format::Frames => {
            let times = frame_times(args, spec.total_duration());
            api::frames(config, &spec, &times)
                .map(|frames| serde_json::to_string_pretty(&frames).expect("frames serialize") + "\n")
        }
    };
    match result {
        Ok(text) => {
            emit(args.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Err(diags) => {
            report(&diags, &Sources::default(), false, false);
            Ok(EXIT_DIAGNOSTICS)
        }
    }
}

fn validate(config: &Config, spec: &Path, json: bool) -> Outcome {
    let (spec, _) = load_spec(spec)?;
    let diags = validate_with(&spec, &EffectRegistry::new(&config.effects));
    report(&diags, &Sources::default(), json, false);
    if diags.iter().any(Diagnostic::is_error) {
        Ok(EXIT_DIAGNOSTICS)
    } else {
        if !json {
            eprintln!("valid");
        }
        Ok(EXIT_OK)
    }
}

fn timings(config: &Config, path: &Path, timing: &TimingArgs) -> Outcome {
    let text = read(path)?;
    let doc = match parse(&text) {
        Ok(parsed) => parsed.doc,
        Err(diags) => {
            let sources = Sources {
                files: vec![(Origin::Narration, path, &text)],
            };
            report(&diags, &sources, false, false);
            return Ok(EXIT_DIAGNOSTICS);
        }
    };
    let model = timing.overrides().apply(config.timing);
    let problems = model.validate();
    if !problems.is_empty() {
        report(&problems, &Sources::default(), false, false);
        return Ok(EXIT_DIAGNOSTICS);
    }
    let words = compute_word_timings(&plain_narration(&doc), &model);
    emit(None, &(serde_json::to_string_pretty(&words).expect("timings serialize") + "\n"))?;
    Ok(EXIT_OK)
}

fn inspect_svg(path: &Path) -> Outcome {
    let text = read(path)?;
    let sources = Sources {
        files: vec![(Origin::Svg, path, &text)],
    };
    match ingest_svg(&text) {
        Ok(ingested) => {
            report(&ingested.warnings, &sources, false, false);
            emit(None, &(ingested.scene.to_json() + "\n"))?;
            Ok(EXIT_OK)
        }
        Err(diags) => {
            report(&diags, &sources, false, false);
            Ok(EXIT_DIAGNOSTICS)
        }
    }
}

fn interpret(config: &Config, svg: &Path, utterance: &str, context: &str, adapter: Option<&str>) -> Outcome {
    let text = read(svg)?;
    let scene = match ingest_svg(&text) {
        Ok(ingested) => ingested.scene,
        Err(diags) => {
            let sources = Sources {
                files: vec![(Origin::Svg, svg, &text)],
            };
            report(&diags, &sources, false, false);
            return Ok(EXIT_DIAGNOSTICS);
        }
    };
    let adapter = api::adapter_for(adapter, config, true).map_err(|d| {
        eprintln!("{d}");
        Failure(EXIT_IO)
    })?;
    let result = adapter.interpret(utterance, context, &scene);
    let utterance_path = Path::new("<utterance>");
    let sources = Sources {
        files: vec![(Origin::Utterance, utterance_path, utterance)],
    };
    report(&result.diagnostics, &sources, false, false);
    emit(None, &(serde_json::to_string_pretty(&result.ir).expect("command serializes") + "\n"))?;
    Ok(if result.diagnostics.iter().any(Diagnostic::is_error) {
        EXIT_DIAGNOSTICS
    } else {
        EXIT_OK
    })
}

fn serve(config: Config, host: IpAddr, port: u16) -> Outcome {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(|e| {
        eprintln!("error: cannot start runtime: {e}");
        Failure(EXIT_IO)
    })?;
    runtime
        .block_on(server::serve(config, SocketAddr::new(host, port)))
        .map_err(|e| {
            eprintln!("error: {e}");
            Failure(EXIT_IO)
        })?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let outcome = load_config(cli.config.as_deref()).and_then(|config| match &cli.command {
        Command::Compile(args) => compile(&config, args),
        Command::Render(args) => render(&config, args),
        Command::Validate { spec, json_diagnostics } => validate(&config, spec, *json_diagnostics),
        Command::Timings { narration, timing } => timings(&config, narration, timing),
        Command::InspectSvg { svg } => inspect_svg(svg),
        Command::Interpret {
            svg,
            context,
            adapter,
            utterance,
        } => interpret(&config, svg, utterance, context, adapter.as_deref()),
        Command::Serve { port, host } => serve(config.clone(), *host, *port),
    });
    match outcome {
        Ok(code) | Err(Failure(code)) => code,
    }
}
