use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    Rank { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("requested depth {requested} exceeds the guaranteed depth {available}")]
    Truncation { requested: u32, available: u32 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Rank { .. } => "rank",
            Error::Domain(_) => "domain",
            Error::Resource(_) => "resource",
            Error::Truncation { .. } => "truncation",
            Error::Consistency(_) => "consistency",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
