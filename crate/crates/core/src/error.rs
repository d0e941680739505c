use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("object out of bounds: {0}")]
    ObjectOutOfBounds(String),
    #[error("no registered scheme produces a code for {0}")]
    NoCode(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("complexity cap {cap} exceeds the system maximum {max}")]
    CapTooLarge { cap: u32, max: u32 },
    #[error("model is empty")]
    EmptyModel,
    #[error("mixture weights sum to {0}, expected 1")]
    WeightSumNotOne(String),
    #[error("mixture components live over different universes")]
    MixedUniverse,
    #[error("{0} is not a member of the model")]
    NotAMember(String),
    #[error("zero likelihood for {0}")]
    ZeroLikelihood(String),
    #[error("threshold {0} millibits is not a whole number of bits")]
    FractionalThreshold(i64),
    #[error("empty sum: no enumerated set contains the data")]
    EmptySum,
    #[error("heaviness precondition violated: right node has {have} admitted neighbors, needs {need}")]
    HeavinessViolated { have: usize, need: u64 },
    #[error("no successful marking run within {0} seeds")]
    RetriesExhausted(u32),
    #[error("search exceeded its budget of {0} states")]
    BudgetExceeded(usize),
    #[error("no admissible distribution in the family")]
    NoAdmissibleDistribution,
    #[error("field exponent {0} outside 2..=16")]
    BadFieldSize(u32),
    #[error("bad length: {0}")]
    BadLength(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("refusing to overwrite existing baseline entry without refreeze")]
    RefreezeRefused,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
