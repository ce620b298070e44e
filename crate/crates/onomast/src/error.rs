use onomast_core::Error as CoreError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("missing mandatory column `{0}`")]
    MissingColumn(&'static str),
    #[error("coding table line {line}: {message}")]
    CodingTable { line: u64, message: String },
    /// A statistic failed for a particular cohort or cohort pair.
    #[error("cohort {cohort}: {source}")]
    Cohort {
        cohort: String,
        #[source]
        source: CoreError,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for too few distinct names, 3 for a divergent
    /// "other names" mass, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            Error::Cohort { source, .. } => source,
            Error::Core(e) => e,
            _ => return 1,
        };
        match core {
            CoreError::InsufficientDistinctNames { .. } | CoreError::EmptyTable => 2,
            CoreError::DivergentOtherMass => 3,
            _ => 1,
        }
    }
}
