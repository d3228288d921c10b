use thiserror::Error;

/// Errors raised by the library. Solver verdicts (sat/unsat/budget) are not
/// errors and are reported through [`crate::solvers::Outcome`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed diagram: label `{label}` occurs {count} time(s), expected 2")]
    MalformedDiagram { label: String, count: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("capacity exceeded: {what} has size {size}, limit is {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("graph contains an induced K4 on {0:?}")]
    InducedK4([String; 4]),

    #[error("no chord diagram realizes the graph under the given constraints")]
    Unrealizable,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("improper coloring: edge {{{0},{1}}} is monochromatic")]
    ImproperColoring(String, String),

    #[error("partial coloring: vertex `{0}` has no color in 1..=3")]
    PartialColoring(String),

    #[error("invalid variable order: {0}")]
    InvalidOrder(String),

    #[error("jump script violated: {0}")]
    ScriptViolation(String),

    #[error("generation stopped at {achieved} of {target} vertices after exhausting retries")]
    Generation { achieved: usize, target: usize },

    #[error("instance fact violated: {0}")]
    FactViolated(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
