//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // Display stops at this level; reporters print the io cause from the
    // source chain, so repeating it here would double it up.
    #[error("{path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {token:?} as a sample value")]
    BadSample {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("{0}")]
    EmptyInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("{what} needs at least {needed} samples, got {got}")]
    TooShort {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("{0} is undefined for a constant signal")]
    ConstantSignal(&'static str),

    /// Sample entropy has no defined value when either template count is zero.
    #[error("sample entropy undefined: {matches_m} template pairs matched at length m, {matches_m1} at m+1")]
    UndefinedEntropy { matches_m: usize, matches_m1: usize },

    #[error("need samples from both classes, found only {0}")]
    SingleClass(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unknown feature {name:?}; valid names: {valid}")]
    UnknownFeature { name: String, valid: String },

    #[error("config: {0}")]
    Config(String),

    #[error("feature matrix: {0}")]
    Matrix(String),

    #[error("segment {id}")]
    InSegment {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the id of the segment being processed when an error bubbles
    /// out of a per-segment computation.
    pub fn in_segment(self, id: &str) -> Error {
        Error::InSegment {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
