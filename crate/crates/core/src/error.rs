use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("invalid instance at `{path}`: {reason}")]
    InvalidInstance { path: String, reason: String },

    #[error("agent {agent} out of range (instance has {n} agents)")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("good {good} out of range (instance has {m} goods)")]
    GoodOutOfRange { good: usize, m: usize },

    #[error("allocation has {bundles} bundles but the instance has {n} agents")]
    BundleCount { bundles: usize, n: usize },

    #[error("good {good} is allocated to both agent {first} and agent {second}")]
    OverlappingBundles {
        good: usize,
        first: usize,
        second: usize,
    },

    #[error("good {0} is not allocated")]
    Unallocated(usize),

    #[error("{0} needs agent weights but the instance is unweighted")]
    MissingWeights(String),

    #[error("enumerating {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: String, cap: u64 },

    #[error("{operation} requires {requirement}")]
    Unsupported {
        operation: &'static str,
        requirement: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInstance {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn unsupported(operation: &'static str, requirement: impl Into<String>) -> Self {
        Error::Unsupported {
            operation,
            requirement: requirement.into(),
        }
    }
}
