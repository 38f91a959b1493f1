use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Breakpoint list is empty, unsorted, has duplicate abscissae or does not start where required.
    #[error("malformed breakpoints: {0}")]
    Structure(String),
    /// A point or function lies outside the set an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
