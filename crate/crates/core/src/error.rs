use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("table is missing cell {0}")]
    MissingCell(String),
    #[error("table has {found} entries, scenario needs {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("behavior is not a valid probability table: {0}")]
    InvalidBehavior(String),
    #[error("behavior is signaling: {0}")]
    Signaling(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}
