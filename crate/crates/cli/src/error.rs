use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Pipeline(#[from] trimspec::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 64 for usage errors, 1 for failures while computing or writing.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            _ => 1,
        }
    }
}
