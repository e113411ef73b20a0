//! Random and mutated inputs for the narration parser, the interpreter and
//! the whole pipeline.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use reelscript_core::interpret::interpret;
use reelscript_core::narration::parse;
use reelscript_core::pipeline::{compile, CompileOptions};
use reelscript_core::scene::ingest_svg;
use reelscript_core::{Diagnostic, Origin};

use super::gallery::GALLERY;

const ATOMS: &[&str] = &[
    "{", "}", "[", "]", "\\", "\\{", "\\]", " ", " ", " ", "\n", "\t", ".", ",", "fade", "in", "out", "the", "bars",
    "lines", "other", "2005-2010", "2rd", "from", "left", "blue", "USA", "one by one", "same", "é", "漢字", "🙂",
    "\u{200b}", "-", "to", "red", "and", "hide", "opening", "0", "-3", "1e309", "NaN",
];

fn random_text(rng: &mut ChaCha8Rng, max_atoms: usize) -> String {
    let n = rng.random_range(0..=max_atoms);
    let mut s = String::new();
    for _ in 0..n {
        if rng.random_bool(0.1) {
            s.push(char::from_u32(rng.random_range(0..0x3000)).unwrap_or('?'));
        } else {
            s.push_str(ATOMS[rng.random_range(0..ATOMS.len())]);
        }
    }
    s
}

fn mutate(rng: &mut ChaCha8Rng, base: &str) -> String {
    let mut chars: Vec<char> = base.chars().collect();
    for _ in 0..rng.random_range(1..=6) {
        let at = rng.random_range(0..=chars.len());
        match rng.random_range(0..3) {
            0 if at < chars.len() => {
                chars.remove(at);
            }
            1 => {
                let c = ['{', '}', '[', ']', '\\', ' '][rng.random_range(0..6)];
                chars.insert(at, c);
            }
            _ => {
                let end = (at + rng.random_range(0..20)).min(chars.len());
                chars.drain(at..end);
            }
        }
    }
    chars.into_iter().collect()
}

fn spanned(d: &Diagnostic, len: usize) -> bool {
    d.span.is_some_and(|s| s.start <= s.end && s.end <= len)
}

#[derive(Debug, Default)]
pub struct FuzzReport {
    pub inputs: usize,
    pub crashes: Vec<String>,
    pub unspanned: Vec<String>,
}

impl FuzzReport {
    fn crash(&mut self, stage: &str, input: &str) {
        self.crashes.push(format!("{stage} panicked on {input:?}"));
    }
}

/// Parser and interpreter on `n` inputs each; every tenth narration also
/// goes through the whole pipeline.
pub fn run_fuzz(seed: u64, n: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    let scenes: Vec<_> = GALLERY.iter().map(|f| ingest_svg(f.svg).expect("fixture").scene).collect();
    let previous = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for i in 0..n {
        let fixture = &GALLERY[i % GALLERY.len()];
        let narration = if i % 2 == 0 {
            random_text(&mut rng, 40)
        } else {
            mutate(&mut rng, fixture.narration)
        };
        let len = narration.chars().count();
        report.inputs += 1;
        match catch_unwind(|| parse(&narration)) {
            Err(_) => report.crash("parse", &narration),
            Ok(result) => {
                let diags = match result {
                    Ok(p) => p.warnings,
                    Err(e) => {
                        if e.is_empty() {
                            report.unspanned.push(format!("parse failed without diagnostics on {narration:?}"));
                        }
                        e
                    }
                };
                for d in diags.iter().filter(|d| !spanned(d, len)) {
                    report.unspanned.push(format!("parse {:?} on {narration:?}", d.code));
                }
            }
        }

        let utterance = random_text(&mut rng, 12);
        let context = random_text(&mut rng, 12);
        let scene = &scenes[i % scenes.len()];
        match catch_unwind(AssertUnwindSafe(|| interpret(&utterance, &context, scene))) {
            Err(_) => report.crash("interpret", &utterance),
            Ok(r) => {
                let ulen = utterance.chars().count();
                for d in r.diagnostics.iter().filter(|d| !spanned(d, ulen)) {
                    report.unspanned.push(format!("interpret {:?} on {utterance:?}", d.code));
                }
            }
        }

        if i % 10 == 0 {
            let run = catch_unwind(|| compile(fixture.svg, &narration, &CompileOptions::default()));
            match run {
                Err(_) => report.crash("compile", &narration),
                Ok(out) => {
                    for d in &out.diagnostics {
                        let from_text = matches!(d.origin, Some(Origin::Narration) | Some(Origin::Utterance));
                        if from_text && !spanned(d, len) {
                            report.unspanned.push(format!("compile {:?} on {narration:?}", d.code));
                        }
                    }
                }
            }
        }
    }
    std::panic::set_hook(previous);
    report
}
