use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] qrd_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },

    /// Some sweep points failed; the rest of the output was still written.
    #[error("{} grid point(s) failed:\n{}", .0.len(), .0.join("\n"))]
    PointsFailed(Vec<String>),

    #[error("{0}")]
    Encode(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Io { .. } | CliError::Encode(_) => 1,
            CliError::PointsFailed(_) => 4,
        }
    }
}

pub fn core_exit_code(e: &qrd_core::Error) -> i32 {
    use qrd_core::Error as E;
    match e {
        E::Unstable(_) => 3,
        E::NonConvergence { .. } | E::TruncationNonConvergence { .. } | E::GridTooSmall { .. } => 4,
        E::Io(_) => 1,
        _ => 2,
    }
}
