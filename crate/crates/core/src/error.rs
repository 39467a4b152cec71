use thiserror::Error;

/// Errors raised by the verification library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve of size {requested} exceeds the configured budget of {budget} entries")]
    Capacity { requested: u64, budget: u64 },

    #[error("argument {value} exceeds the sieve limit {limit}")]
    SieveLimit { value: String, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Bernoulli index {0} has no exact polynomial form here (supported: 1, 2, 3)")]
    UnsupportedIndex(u32),

    #[error("invalid rational literal {input:?}: {reason}")]
    ParseRational { input: String, reason: &'static str },

    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
