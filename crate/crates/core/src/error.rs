use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid population size {0}: need at least 2 units")]
    PopulationTooSmall(usize),
    #[error("sample size {n} exceeds population size {population}")]
    SampleTooLarge { n: usize, population: usize },
    #[error("sample size must be positive")]
    EmptySampleSize,
    #[error("size variable must be strictly positive and finite (unit {index}: {value})")]
    NonPositiveSize { index: usize, value: f64 },
    #[error("operation requires a nonempty sample")]
    EmptySample,
    #[error("need at least 2 observations, got {0}")]
    TooFewObservations(usize),
    #[error("invalid partition count {m} for sample of size {n}: need 2 <= M <= n")]
    InvalidPartitionCount { m: usize, n: usize },
    #[error("partition index {k} out of range for M = {m}")]
    PartitionIndex { k: usize, m: usize },
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("count {s} out of range 0..={m}")]
    CountOutOfRange { s: usize, m: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid sample record: {0}")]
    InvalidRecord(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
