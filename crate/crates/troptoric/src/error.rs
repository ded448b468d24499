use thiserror::Error as ThisError;

/// Crate-wide error type.
///
/// `Malformed` marks unusable input data (bad schema, unparseable numbers);
/// everything else is a semantic failure on well-formed data. The CLI maps
/// the former to exit code 2 and the latter to exit code 1.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a chain complex: (d1·d0)[{row},{col}] = {value} ≠ 0")]
    NotAComplex {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
