use thiserror::Error;

/// Errors surfaced to the command line.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", describe_core(.0))]
    Core(#[from] nilrad::Error),
    /// A malformed command; `column` is a 0-based byte offset into the command.
    #[error("syntax error at column {}: {message}", .column + 1)]
    Syntax { column: usize, message: String },
    #[error("name `{0}` is already bound")]
    DuplicateName(String),
    #[error("unknown example `{0}`; try one of: {names}", names = crate::examples::NAMES.join(", "))]
    UnknownExample(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn describe_core(e: &nilrad::Error) -> String {
    match e {
        nilrad::Error::Syntax { position, expected, found } => {
            format!("syntax error at column {}: expected {}, found {found}", position + 1, expected.join(" or "))
        }
        other => other.to_string(),
    }
}

impl CliError {
    /// 1 for user errors, 2 for broken internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) | CliError::Core(nilrad::Error::RatioUndefined(_)) => 2,
            _ => 1,
        }
    }

    /// Shifts a position inside a sub-string to a position in the enclosing command.
    pub(crate) fn offset_by(self, start: usize) -> Self {
        match self {
            CliError::Core(nilrad::Error::Syntax { position, expected, found }) => {
                CliError::Core(nilrad::Error::Syntax { position: position + start, expected, found })
            }
            CliError::Syntax { column, message } => CliError::Syntax { column: column + start, message },
            other => other,
        }
    }

    pub fn column(&self) -> Option<usize> {
        match self {
            CliError::Core(nilrad::Error::Syntax { position, .. }) => Some(*position),
            CliError::Syntax { column, .. } => Some(*column),
            _ => None,
        }
    }
}
