use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INADMISSIBLE: i32 = 3;
    pub const SOLVER_ABORT: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("inadmissible model for p = {p}:\n{report}")]
    Inadmissible { p: f64, report: String },
    #[error(transparent)]
    Core(#[from] inls::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Inadmissible { .. } | CliError::Core(inls::Error::Inadmissible { .. }) => {
                exit::INADMISSIBLE
            }
            CliError::Core(
                inls::Error::Instability { .. } | inls::Error::NonConvergence { .. },
            ) => exit::SOLVER_ABORT,
            _ => exit::USAGE,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
