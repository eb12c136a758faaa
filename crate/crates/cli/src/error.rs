use std::fmt;

use noon_core::ProgramError;
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Parse(ProgramError),
    Physics(noon_core::Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// One-line JSON description for standard error.
    pub fn to_json(&self) -> String {
        let body = match self {
            CliError::Parse(e) => json!({
                "kind": "parse",
                "line": e.line,
                "column": e.column,
                "message": e.to_string(),
            }),
            CliError::Physics(e) => json!({ "kind": "physics", "message": e.to_string() }),
            CliError::Io(m) => json!({ "kind": "io", "message": m }),
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
        };
        json!({ "error": body }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => e.fmt(f),
            CliError::Physics(e) => e.fmt(f),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ProgramError> for CliError {
    fn from(e: ProgramError) -> Self {
        CliError::Parse(e)
    }
}

impl From<noon_core::Error> for CliError {
    fn from(e: noon_core::Error) -> Self {
        CliError::Physics(e)
    }
}
