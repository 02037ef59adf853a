use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cover parameters: {0}")]
    InvalidParams(String),
    #[error("invalid corner predicate: {0}")]
    InvalidPredicate(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("refinements exist only for 3C.3uC and 3C.3dC, not `{0}`")]
    NoRefinement(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("constraint system is infeasible")]
    Infeasible,
    #[error("grid resolution {0} exceeds the limit of 12")]
    Resolution(usize),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
