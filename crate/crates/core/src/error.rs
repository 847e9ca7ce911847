use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fixed-point iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("point (x = {x}, z = {z}) lies outside the domain of the core egf")]
    OutsideDomain { x: f64, z: f64 },
    #[error("no singularity found: {0}")]
    NoSingularityFound(String),
    #[error("singular linear system (|det| = {0:e})")]
    SingularSystem(f64),
    #[error("near-critical parameters (|Φ_z| = {0:e}) are not supported")]
    NearCritical(f64),
    #[error("table has {count} graphs counted for (n = {n}, m = {m}) but no explicit graph list")]
    MissingGraphList { n: usize, m: usize, count: String },
    #[error("class `{0}` has no graph-level sampler")]
    SizeOnlyClass(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("invalid class spec `{0}`")]
    ClassSpec(String),
    #[error("sampler aborted: labeled size exceeded {0}")]
    Aborted(usize),
    #[error("sampler recursion budget of {0} steps exceeded")]
    RecursionBudgetExceeded(u64),
    #[error("exact-size sampling gave up after {attempts} attempts ({accepted} accepted)")]
    AttemptsExhausted { attempts: u64, accepted: u64 },
    #[error("network already contains the pole edge")]
    PoleEdgeConflict,
    #[error("not a network: {0}")]
    NotANetwork(String),
    #[error("simple-graph violation during assembly: {0}")]
    Assembly(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
