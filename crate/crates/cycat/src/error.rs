use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {0} is not in the carrier")]
    NotInCarrier(i64),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("scalar is not divisible: needs valuation >= {need}, has {have:?}")]
    NotDivisible { need: usize, have: Option<usize> },

    #[error("scalar is not a unit (t^0 coefficient is zero)")]
    NotUnit,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid pair ({x},{y}): {reason}")]
    InvalidPair { x: i64, y: i64, reason: String },

    #[error("automorphism is not admissible: {0}")]
    NotAdmissible(String),

    #[error("morphism does not factor through eta at entry ({row},{col})")]
    NotFactoring { row: usize, col: usize },

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("carrier is not cyclically ordered: {0}")]
    NonCyclicOrder(String),

    #[error("object is not valid: {0}")]
    InvalidObject(String),

    #[error("arcs are in different AR components: {0} vs {1}")]
    ComponentMismatch(String, String),

    #[error("arc is not rigid: {0}")]
    NotRigid(String),

    #[error("chord set is not a maximal angulation: missing region {0}")]
    NotMaximal(String),

    #[error("arc {0} is not in the cluster")]
    NotInCluster(String),

    #[error("unknown format: {0}")]
    UnknownFormat(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
