use thiserror::Error;

/// Errors shared across the toolkit.
///
/// Numeric validation failures carry the measured magnitude so callers can
/// report how badly an input missed a constraint.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |m - m†| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix contains non-finite entries")]
    NotFinite,

    #[error("operator is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace:.12} but must be 1")]
    TraceNotOne { trace: f64 },

    #[error("effects do not sum to identity (max deviation = {deviation:.3e})")]
    EffectSumNotIdentity { deviation: f64 },

    #[error("map is not trace preserving (max deviation = {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("column {column} of stochastic map sums to {sum:.12}, not 1")]
    NotStochastic { column: usize, sum: f64 },

    #[error("negative entry {value:.3e} where a probability was expected")]
    NegativeProbability { value: f64 },

    #[error("probabilities sum to {total:.12}, not 1")]
    NotNormalized { total: f64 },

    #[error("tensor power order {k} is not supported (max 4)")]
    OrderTooLarge { k: usize },

    #[error("dimension {dim} exceeds the supported limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("{0:?} is not a permutation of 0..{1}")]
    NotAPermutation(Vec<usize>, usize),

    #[error("operational distance supports at most 16 outcomes, got {n}")]
    TooManyOutcomes { n: usize },

    #[error("brickwork circuits support at most 8 qubits, got {n}")]
    TooManyQubits { n: usize },

    #[error("delta' = {value} is outside [0, 1/3]")]
    DeltaOutOfRange { value: f64 },

    #[error("input outside the formula's validity region: {0}")]
    OutOfValidityRegion(String),

    #[error("closed-form value disagrees with the generic distance by {deviation:.3e}")]
    FormulaMismatch { deviation: f64 },

    #[error("unknown case '{0}'")]
    UnknownCase(String),

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
