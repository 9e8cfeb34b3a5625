use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<u32>),

    #[error("invalid flag shape: {0}")]
    InvalidShape(String),

    #[error("cannot parse {input:?} at position {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("r = {r} exceeds n = {n}")]
    RankExceedsDimension { n: usize, r: usize },

    #[error("partition {partition} does not fit in a {rows}x{cols} box")]
    OutsideBox {
        partition: String,
        rows: usize,
        cols: usize,
    },

    #[error("invalid column set {columns:?} for a {rows}x{cols} box")]
    InvalidColumns {
        columns: Vec<usize>,
        rows: usize,
        cols: usize,
    },

    #[error("invalid permutation {word:?}: {reason}")]
    InvalidPermutation { word: Vec<usize>, reason: String },

    #[error("invalid partition tuple: {0}")]
    InvalidTuple(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("unassigned variable {0}")]
    UnassignedVariable(String),

    #[error("denominator vanishes (variables involved: {variables:?})")]
    DenominatorVanishes { variables: Vec<String> },

    #[error("partition {partition} has {parts} parts but only {variables} variables were given")]
    PartitionTooLong {
        partition: String,
        parts: usize,
        variables: usize,
    },

    #[error(
        "partition {partition} is not a maximally wide or tall rectangle in a {rows}x{cols} box"
    )]
    NotFrozen {
        partition: String,
        rows: usize,
        cols: usize,
    },

    #[error("level {level} out of range 1..={rho}")]
    LevelOutOfRange { level: usize, rho: usize },

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("normalizing minor vanishes at level {level}")]
    NormalizingMinorVanishes { level: usize },

    #[error("matrix dimensions {rows}x{cols} do not match level {level} of {shape}")]
    MatrixShape {
        level: usize,
        rows: usize,
        cols: usize,
        shape: String,
    },

    #[error("point lies outside the open locus: {0}")]
    OutsideOpenLocus(String),

    #[error("sampling retry budget of {0} exhausted")]
    RetryBudgetExhausted(usize),

    #[error("expected {expected} external values, got {got}")]
    ExternalCount { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("solver found {found} points, expected {expected}")]
    SolverUnderCount { expected: usize, found: usize },

    #[error("candidate residual {0:e} is too large to trust")]
    UntrustedCandidate(f64),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
