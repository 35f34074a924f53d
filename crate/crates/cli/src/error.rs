use std::fmt;
use std::process::ExitCode;

/// A failed command. Usage and configuration problems exit 2, domain
/// failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { code: &'static str, message: String },
}

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        CliError::Usage(message.to_string())
    }

    pub fn domain(code: &'static str, message: impl fmt::Display) -> Self {
        CliError::Domain { code, message: message.to_string() }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Domain { .. } => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Domain { code, message } => write!(f, "error[{code}]: {message}"),
        }
    }
}
