use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every active component carries zero weight at `t`.
    #[error("degenerate scenario at t={t}: no active component has positive weight")]
    DegenerateScenario { t: usize },

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Config text could not be parsed; the message carries line and field.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("run {scenario}/{learner}/seed {seed} failed: {source}")]
    Run {
        scenario: String,
        learner: String,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
