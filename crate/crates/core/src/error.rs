use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: no edges found")]
    EmptyInput,

    #[error("unknown dataset '{name}' (available: {available})")]
    UnknownDataset { name: String, available: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("node {0} is already in the seed set")]
    NodeInSeeds(usize),

    #[error("seed set covers every node; nothing left to score")]
    SeedsCoverGraph,

    #[error("beta puts zero mass on coalition sizes >= {0}")]
    ZeroConditionalMass(usize),

    #[error("enumeration guard exceeded: {count} > {guard}; use a heuristic instead")]
    GuardExceeded { count: u128, guard: u128 },

    #[error("every node is already active")]
    AllActive,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
