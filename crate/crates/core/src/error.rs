use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subshift: {0}")]
    InvalidSubshift(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {what} ({count} > {cap})")]
    ResourceCap {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("no convergence after {iterations} iterations (enclosure width {width:e})")]
    NonConvergence { iterations: usize, width: f64 },

    #[error("point is not periodic with period {0}")]
    NotPeriodic(usize),

    #[error("point has no declared eventually periodic forward itinerary")]
    NoPeriodicTail,

    #[error("invalid Cantor set: {0}")]
    InvalidCantorSet(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
