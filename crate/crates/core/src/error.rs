use thiserror::Error;

/// Structural problems with graph data, independent of where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateBundle(String),
    #[error("edge refers to undeclared vertex `{0}`")]
    UndeclaredVertex(String),
    #[error("edge `{0}` has multiplicity 0")]
    ZeroMultiplicity(String),
    #[error("graph has no vertices")]
    EmptyVertexSet,
    #[error("invalid identifier `{0}` (expected [A-Za-z0-9_]+)")]
    InvalidId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    InvalidGraphAt { line: usize, source: GraphError },
    #[error(transparent)]
    InvalidGraph(#[from] GraphError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` has infinite multiplicity; select instances individually (e.g. `{0}#0`)")]
    OmegaWholesale(String),
    #[error("{what}: {actual} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("cycle enumeration stopped: more than {limit} cycles")]
    CycleLimit { limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Cap-style failures signal "refuse the analysis", not a bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::CycleLimit { .. })
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
