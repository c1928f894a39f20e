use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {text:?} as a zero height")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{path}:{line}: zero heights must be strictly ascending ({previous} then {value})")]
    Order {
        path: PathBuf,
        line: usize,
        previous: f64,
        value: f64,
    },

    #[error("invalid zero: {0}")]
    InvalidZero(String),

    #[error("stretch blocks cover {requested} zeros but the base set holds only {available}")]
    BlockOverflow { requested: usize, available: usize },

    #[error("fluctuation mode {mode} requires every zero on the critical line")]
    ModeMismatch { mode: &'static str },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("state {requested} not available ({available} solved)")]
    MissingState { requested: usize, available: usize },

    #[error("under-determined fit: {samples} samples in window, need at least {needed}")]
    UnderDetermined { samples: usize, needed: usize },

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("iteration diverged at step {step}: level {level} moved from {from} to {to}")]
    Diverged {
        step: usize,
        level: usize,
        from: f64,
        to: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
