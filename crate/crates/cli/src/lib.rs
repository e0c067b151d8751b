//! Command-line front end for `sk3-core`: argument parsing, dispatch, JSON reports and the
//! fixture runner.

pub mod args;
mod commands;
pub mod fixtures;

use args::Cli;
use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Envelope of every `--json` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub result: Value,
    pub notes: Vec<String>,
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Bad invocation detected after parsing; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Successful command output: JSON payload, text rendering, notes.
pub(crate) struct Output {
    pub result: Value,
    pub text: String,
    pub notes: Vec<String>,
    /// Overrides the success status (used by the fixture runner).
    pub code: i32,
}

impl Output {
    pub fn new(result: Value, text: String) -> Self {
        Self {
            result,
            text,
            notes: Vec::new(),
            code: 0,
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

/// Runs `argv` (program name first) and captures the result.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).cloned().collect();
    let json = cli.json;
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli)),
            Err(e) => Err(anyhow::anyhow!("cannot start {n} threads: {e}")),
        },
        None => commands::dispatch(&cli),
    };
    match result {
        Ok(out) => {
            let stdout = if json {
                let r = Report {
                    schema_version: SCHEMA_VERSION,
                    command,
                    result: out.result,
                    notes: out.notes,
                };
                serde_json::to_string_pretty(&r).expect("serializable") + "\n"
            } else {
                let mut s = out.text;
                for n in &out.notes {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            };
            Outcome {
                code: out.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let code = if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            };
            let msg = format!("{e:#}");
            let stdout = if json {
                let v = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command,
                    "error": msg,
                });
                serde_json::to_string_pretty(&v).expect("serializable") + "\n"
            } else {
                String::new()
            };
            Outcome {
                code,
                stdout,
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}
