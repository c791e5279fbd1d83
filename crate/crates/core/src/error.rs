use thiserror::Error;

/// Errors produced anywhere in the certification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed number {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("polynomial has repeated roots; deflate it with square_free_part first")]
    RepeatedRoots,

    #[error("{0} is a root of the polynomial; perturb the endpoint")]
    EndpointIsRoot(String),

    #[error("precision exhausted: {0} (rerun with --mode exact)")]
    PrecisionExhausted(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
