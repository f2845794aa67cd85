use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus below 2^31")]
    NotPrime(u64),
    #[error("division by zero")]
    DivideByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field F_{q} too small: need q >= {needed}")]
    FieldTooSmall { q: u32, needed: u64 },
    #[error("no prime modulus >= {min_q} below 2^31")]
    FieldSearchFailed { min_q: u64 },
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("delta {delta} out of range [2, r = {r}]")]
    DeltaOutOfRange { delta: usize, r: usize },
    #[error("invalid goal pair ({0}, {1}) for {2} surviving nodes")]
    GoalPairInvalid(usize, usize, usize),
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error(
        "plan for node {failed} is not access-optimal: PCG {pcg}, node {node}, row {row} touches symbol {col} outside the plan"
    )]
    NotAccessOptimalPlan {
        failed: usize,
        pcg: usize,
        node: usize,
        row: usize,
        col: usize,
    },
    #[error("bad helper set: {0}")]
    BadHelperSet(String),
    #[error("code mismatch: {0}")]
    CodeMismatch(String),
    #[error("too few survivors: need {needed}, have {available}")]
    TooFewSurvivors { needed: usize, available: usize },
    #[error("node {0} is healthy (use --force to rebuild it anyway)")]
    NodeHealthy(usize),
    #[error("malformed shard file: {0}")]
    ShardFormat(String),
    #[error("unsupported field for byte packing: q = {0} must exceed 15")]
    PackingUnsupported(u32),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
