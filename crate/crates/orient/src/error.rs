use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed instance document: {0}")]
    Malformed(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("{solver}: size {size} exceeds bound {bound}")]
    BoundExceeded {
        solver: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("graph is not bipartite with respect to the given sides")]
    NotBipartite,
    #[error("{0}")]
    Unsupported(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
