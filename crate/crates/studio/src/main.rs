use std::process::ExitCode;

use clap::Parser;

use reelscript_studio::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
