use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level {level}: {reason}")]
    Schedule { level: usize, reason: String },

    #[error("packing infeasible: {0}")]
    Packing(String),

    #[error(
        "tree too large to enumerate: {nodes} nodes at generation {generation} (limit {limit})"
    )]
    TreeTooLarge {
        generation: usize,
        nodes: f64,
        limit: usize,
    },

    #[error("tree has no realized centers; call CantorTree::realize_centers first")]
    Unrealized,

    #[error("requested depth {requested} exceeds tree depth {available}")]
    Depth { requested: usize, available: usize },

    #[error("invalid indices: {0}")]
    Indices(String),

    #[error("indices not in sharpness regime: {0}")]
    Sharpness(String),

    #[error("invalid measure: {0}")]
    Measure(String),

    #[error("gauge: {0}")]
    Gauge(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
