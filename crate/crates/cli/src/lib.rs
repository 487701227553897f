//! Front end for the `wildchar` tool: parses curve, quiver and family
//! documents, runs one command and wraps its result in a canonical JSON
//! envelope.

pub mod canonical;
mod commands;
pub mod schemas;
pub mod spec;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

pub use commands::Settings;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("spec error at {path}: {msg}")]
    Spec { path: String, msg: String },
    #[error("spec does not fit the command: {0}")]
    Mismatch(String),
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error(transparent)]
    Model(#[from] wildchar::Error),
}

impl CliError {
    /// Process exit code: every input problem is a spec error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Dims,
    Verify,
    Deform,
    Quiver,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Analyze,
        Command::Dims,
        Command::Verify,
        Command::Deform,
        Command::Quiver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Dims => "dims",
            Command::Verify => "verify",
            Command::Deform => "deform",
            Command::Quiver => "quiver",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Command, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

/// Command-line overrides; each wins over the matching spec option.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    pub no_center_correction: bool,
    pub dir_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub tool_version: String,
    pub command: Command,
    /// SHA-256 of the canonical text of the input document(s).
    pub input_hash: String,
    pub payload: Value,
    pub warnings: Vec<String>,
    /// `$id` of the payload schema.
    pub schema: String,
}

impl Envelope {
    /// Canonical JSON text with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let value = serde_json::to_value(self).expect("envelope serializes");
        let mut s = canonical::to_canonical(&value);
        s.push('\n');
        s
    }
}

/// A finished run: the report, and whether any verification check failed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub envelope: Envelope,
    pub verification_failures: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verification_failures > 0 {
            3
        } else {
            0
        }
    }
}

/// Run `command` on the spec text (and, for `deform`, the family text).
pub fn run(command: Command, spec_text: &str, family_text: Option<&str>, flags: &Flags) -> Result<Outcome, CliError> {
    let spec = spec::parse_json(spec_text)?;
    let family = family_text.map(spec::parse_json).transpose()?;
    run_value(command, &spec, family.as_ref(), flags)
}

pub fn run_value(command: Command, spec: &Value, family: Option<&Value>, flags: &Flags) -> Result<Outcome, CliError> {
    let hashed = match (command, family) {
        (Command::Deform, Some(f)) => serde_json::json!({ "spec": spec, "family": f }),
        _ => spec.clone(),
    };
    let input_hash = canonical::sha256_hex(&canonical::to_canonical(&hashed));
    let result = commands::dispatch(command, spec, family, flags)?;
    Ok(Outcome {
        envelope: Envelope {
            tool_version: TOOL_VERSION.to_string(),
            command,
            input_hash,
            payload: result.payload,
            warnings: result.warnings,
            schema: schemas::payload_id(command).to_string(),
        },
        verification_failures: result.failures,
    })
}
