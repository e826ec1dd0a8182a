use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop on vertex {0} is not allowed in a simple graph")]
    InvalidEdge(usize),

    #[error("edge {0}-{1} appears more than once")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{what}: size {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("memo table exceeded {0} entries")]
    ResourceExhausted(usize),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("ascent left the region x + y <= {0:e}; supremum search suspected divergent")]
    DivergenceSuspected(f64),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("model is not antiferromagnetic (positive eigenvalues: {positive})")]
    NotAntiferromagnetic { positive: usize },

    #[error("weight matrix is asymmetric at ({i},{j}) by {diff:e}")]
    Asymmetry { i: usize, j: usize, diff: f64 },

    #[error("negative weight {value} at ({i},{j})")]
    NegativeWeight { i: usize, j: usize, value: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
