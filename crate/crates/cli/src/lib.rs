//! Command-line front end: derivation, solving, verification and a one-shot
//! reproduction run with JSON and LaTeX output.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

pub mod args;
mod commands;
mod latex;
mod report;
mod reproduce;

pub use args::Cli;
pub use report::SCHEMA;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const FIXTURE_MISMATCH: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

/// Everything a run produced; `main` forwards it to the process.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: exit::USAGE, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: exit::INTERNAL, message: message.into() }
    }
}

pub(crate) struct Ctx {
    pub stdout: String,
    pub stderr: String,
    /// Human-readable text is suppressed when a document goes to stdout.
    pub quiet: bool,
}

impl Ctx {
    pub fn say(&mut self, line: impl AsRef<str>) {
        if !self.quiet {
            self.stdout.push_str(line.as_ref());
            self.stdout.push('\n');
        }
    }

    pub fn warn(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }

    /// Writes `content` to `path` (resolved against `out_dir`), or to stdout for `-`.
    pub fn write(&mut self, out_dir: Option<&Path>, path: &Path, content: &str) -> Result<(), CliError> {
        if path == Path::new("-") {
            self.stdout.push_str(content);
            return Ok(());
        }
        let full: PathBuf = match out_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        };
        if let Some(parent) = full.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::usage(format!("cannot create {}: {e}", parent.display())))?;
        }
        fs::write(&full, content).map_err(|e| CliError::usage(format!("cannot write {}: {e}", full.display())))
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: exit::USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: exit::OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut ctx = Ctx { stdout: String::new(), stderr: String::new(), quiet: false };
    let code = match commands::dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            ctx.warn(format!("error: {}", e.message));
            e.code
        }
    };
    Outcome { code, stdout: ctx.stdout, stderr: ctx.stderr }
}
