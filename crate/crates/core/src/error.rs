use thiserror::Error;

/// Errors raised by class construction, capacity computations and bound evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("parameter `{name}` out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },

    #[error("{what} exceeds the configured cap of {cap} (got {got})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("class is not {epsilon}-separated: rows {first} and {second} are at distance {distance}")]
    NotSeparated {
        epsilon: f64,
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed class file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        detail: detail.into(),
    }
}
