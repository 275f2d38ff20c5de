//! Process-level error taxonomy. Every failure funnels into one of four
//! exit classes; the distinction is part of the CLI contract and tested.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown names, malformed literals -> exit 64.
    Usage(String),
    /// Unparseable dataset contents -> exit 65, with the offending line.
    Data { line: Option<usize>, msg: String },
    /// Unreadable input or unwritable output -> exit 73.
    Io(String),
    /// The library rejected the inputs -> exit 2, named diagnostic.
    Domain(mixlaw::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data { .. } => 65,
            CliError::Io(_) => 73,
            CliError::Domain(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Data {
                line: Some(line),
                msg,
            } => write!(f, "error: line {line}: {msg}"),
            CliError::Data { line: None, msg } => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "error: {msg}"),
            CliError::Domain(e) => write!(f, "error: {}: {e}", e.name()),
        }
    }
}

impl From<mixlaw::Error> for CliError {
    fn from(e: mixlaw::Error) -> Self {
        CliError::Domain(e)
    }
}
