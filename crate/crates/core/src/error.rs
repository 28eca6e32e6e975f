use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed textual input (braid words, Gauss words, numbers).
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input outside an operation's domain.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A size guard refused the computation.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An identity that must hold did not; names the identity.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
