use thiserror::Error;

/// Errors raised by the series engine, the identity catalog and the parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QsError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid Pochhammer base: exponent {0} must be at least 1")]
    InvalidBase(i64),
    #[error("product has a vanishing factor at index {index} (factor 1 - {factor})")]
    ZeroFactor { index: usize, factor: String },
    #[error("exponent {exponent} is not below the series order {order}")]
    OrderExceeded { exponent: i64, order: i64 },
    #[error("C({z}, {y}) is undefined: z + 1/z - y - 1/y vanishes")]
    DegenerateC { z: String, y: String },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("identity `{0}` has no recorded specialization path")]
    MissingSpecialization(String),
    #[error("result is only exact below q^{got}, wanted q^{wanted}")]
    PrecisionLoss { wanted: i64, got: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = QsError> = std::result::Result<T, E>;
