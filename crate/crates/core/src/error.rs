use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid letter {found:?} at position {position}")]
    InvalidLetter { position: usize, found: char },

    #[error("malformed word text: {0}")]
    MalformedWord(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("n = {n} exceeds the exhaustive enumeration capacity ({max})")]
    Capacity { n: usize, max: usize },

    #[error(
        "retry cap of {cap} exceeded after {accepted} acceptances (acceptance rate estimate {rate:.3e})"
    )]
    RetryCapExceeded { cap: u64, accepted: u64, rate: f64 },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("word has a nonempty reduction ({0})")]
    NonemptyReduction(String),

    #[error("map is not in the image of the bijection: {0}")]
    NotInImage(String),

    #[error("burger walk undefined at index {0}")]
    UndefinedWalk(i64),

    #[error("window cap of {cap} letters reached (partial radius {partial_radius:?})")]
    WindowCapExceeded {
        cap: usize,
        partial_radius: Option<usize>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
