use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("empty hyperedge `{name}`{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    EmptyEdge { name: String, line: Option<usize> },

    #[error("document contains no hyperedges")]
    EmptyDocument,

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node universes differ: {0}")]
    UniverseMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} exceeds the configured ceiling ({actual} > {limit})")]
    Ceiling {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("invalid component graph: {0}")]
    InvalidComponentGraph(String),

    #[error("tree projection failed validation: {0}")]
    Validation(String),

    #[error("no greedy tree projection within kmax = {0}")]
    NoProjection(usize),

    #[error("unsafe head variable `{0}` does not occur in the body")]
    UnsafeHead(String),

    #[error("relation `{0}` not found in the database")]
    UnknownRelation(String),

    #[error("arity mismatch for `{relation}`: expected {expected}, found {found}")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },

    #[error("unsatisfiable instance spec: {0}")]
    Unsatisfiable(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}
