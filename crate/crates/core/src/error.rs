use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("arity mismatch: rule {rule} got {got} child values")]
    Arity { rule: String, got: usize },

    #[error("length mismatch: expected {expected} bits, got {got}")]
    Length { expected: usize, got: usize },

    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },

    #[error("malformed tree: {0}")]
    Tree(String),

    #[error("malformed circuit: {0}")]
    Circuit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
