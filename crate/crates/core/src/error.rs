use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected a pattern of length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("pattern component {index} is {value}; product units need strictly positive inputs")]
    Domain { index: usize, value: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    Argument(&'static str),
}
