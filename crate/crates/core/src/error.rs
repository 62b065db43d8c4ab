use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("pbm: {message} (at byte {offset})")]
    Pbm { offset: usize, message: String },

    #[error("invalid decomposition: {} violation(s)", .0.len())]
    InvalidDecomposition(Vec<crate::mv::Violation>),

    #[error("unusable image: {0}")]
    UnusableImage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
