use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from `{0}` (expected `p` or `p/q` with q > 0)")]
    ParseRational(String),
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("duplicate consecutive vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("collinear vertices around index {0}")]
    CollinearVertices(usize),
    #[error("vertices do not bound a convex polygon")]
    NonConvex,
    #[error("matrix is not unimodular (determinant {0}, want +1 or -1)")]
    NotUnimodular(i64),
    #[error("polygon is not Delzant at vertex {index} {vertex}: corner determinant {det}")]
    NotDelzant {
        index: usize,
        vertex: String,
        det: String,
    },
    #[error("vertex index {index} out of range for polygon with {len} vertices")]
    VertexIndexOutOfRange { index: usize, len: usize },
    #[error("blow-up size {eps} is not strictly smaller than adjacent edge length {limit}")]
    BlowUpTooLarge { eps: String, limit: String },
    #[error("parameter {name} = {value} is outside its domain {domain}")]
    ParameterOutsideDomain {
        name: String,
        value: String,
        domain: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pi-scaled values with different pi powers ({0} vs {1}) cannot be combined")]
    PiPowerMismatch(u32, u32),
    #[error("scan grid is empty")]
    EmptyGrid,
    #[error("polygon file line {line}: {message}")]
    ParsePolygon { line: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to: 2 for usage and parse
    /// errors on the command line, 1 for domain errors in the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::UnknownGenerator(_) => 2,
            _ => 1,
        }
    }
}
