use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Pauli(gensel::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Csv(String),
    #[error("{0}")]
    Core(gensel::Error),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Pauli(_) => "pauli",
            Self::Io { .. } => "io",
            Self::Config(_) => "config",
            Self::Csv(_) => "csv",
            Self::Core(_) => "compute",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Pauli(_) | Self::Config(_) => 3,
            Self::Io { .. } | Self::Csv(_) => 4,
            Self::Core(_) => 1,
        }
    }

    /// `error kind=<kind> message="<text>"` on one line.
    pub fn one_line(&self) -> String {
        let text = self.to_string().replace('\\', "\\\\").replace('"', "\\\"");
        let text = text.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error kind={} message=\"{}\"", self.kind(), text)
    }
}

impl From<gensel::Error> for CliError {
    fn from(e: gensel::Error) -> Self {
        Self::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e.to_string())
    }
}
