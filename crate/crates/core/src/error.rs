use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("unsupported field: n = {0}")]
    UnsupportedField(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not coprime: {0}")]
    NotCoprime(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inconsistent character data: {0}")]
    Inconsistent(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
