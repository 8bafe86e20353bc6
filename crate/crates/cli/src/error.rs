use std::path::PathBuf;

use groupvalue_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A problem at a known place in an input file.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {message}", path.display())]
    File { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),

    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn parse(path: &std::path::Path, line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_capability() => 3,
            CliError::Internal(_) => 4,
            _ => 2,
        }
    }

    /// Message for the error stream, with the way out for capability limits.
    pub fn render(&self) -> String {
        match self {
            CliError::Core(CoreError::ExactCapExceeded { .. }) => {
                format!("error: {self}\nhint: rerun with --mc (optionally --iters N --seed S) to estimate by sampling")
            }
            CliError::Core(CoreError::BudgetExceeded { .. }) => {
                format!("error: {self}\nhint: raise --budget or lower --size")
            }
            _ => format!("error: {self}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
