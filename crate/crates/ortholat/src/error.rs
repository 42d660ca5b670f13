use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is zero at working precision; its valuation is unknown")]
    ZeroAtPrecision,
    #[error("precision exhausted: {needed} digits needed, {available} available")]
    Precision { needed: i64, available: i64 },
    #[error("not a square in Z_p")]
    NotSquare,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision { .. } | Error::ZeroAtPrecision)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
