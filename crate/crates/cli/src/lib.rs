//! Front end for `poisson-core`: problem-file parsing, command dispatch and
//! deterministic JSON reports.
//!
//! Exit codes: 0 computed, 1 input error, 2 invariant failure, 3 not
//! stabilized.

pub mod commands;
pub mod poly_parse;
pub mod problem;

use serde_json::{json, Value};
use thiserror::Error;

pub use commands::{build_atlas, run, Command, Flags, Outcome};
pub use problem::{ParseError, ProblemFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{message}")]
    Input { message: String, object: Option<String> },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }

    pub fn to_json(&self) -> Value {
        let err = match self {
            CliError::Parse(p) => json!({"kind": "parse", "line": p.line, "message": p.message}),
            CliError::Usage(m) => json!({"kind": "usage", "message": m}),
            CliError::Input { message, object } => json!({"kind": "input", "message": message, "object": object}),
            CliError::Io { path, message } => json!({"kind": "io", "path": path, "message": message}),
        };
        json!({"error": err, "status": "input_error", "exit_code": 1})
    }
}

/// Parse `text` and run `cmd` on it.
pub fn run_text(cmd: &Command, text: &str, flags: &Flags) -> Result<Outcome, CliError> {
    let pf = ProblemFile::parse(text)?;
    run(cmd, &pf, flags)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
