use porc_core::PorcError;
use serde::Serialize;

pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(PorcError),
    Io(String),
}

impl From<PorcError> for CliError {
    fn from(e: PorcError) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json_line(&self) -> String {
        let (error, message) = match self {
            CliError::Usage(m) => ("UsageError", m.clone()),
            CliError::Domain(e) => (e.code(), e.to_string()),
            CliError::Io(m) => ("IoError", m.clone()),
        };
        serde_json::to_string(&ErrorLine { error, message }).unwrap_or_else(|_| format!("{{\"error\":\"{error}\"}}"))
    }
}
