use thiserror::Error;

/// Errors raised by the library. Numerical non-convergence is not an error;
/// it is reported through flags on the affected records.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {degree}: must lie in {min}..={max}")]
    InvalidDegree { degree: u32, min: u32, max: u32 },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("mask {mask:#x} has bits above degree {degree}")]
    InvalidMask { degree: u32, mask: u64 },

    #[error("mask range [{lo}, {hi}) is outside [0, {limit}]")]
    RangeOutOfBounds { lo: u64, hi: u64, limit: u64 },

    #[error("class index {n} out of range for degree {degree} (expected 0..={max})", max = degree + 1)]
    ClassOutOfRange { degree: u32, n: u32 },

    #[error("generator position {position} out of range for degree {degree}")]
    PositionOutOfRange { degree: u32, position: u32 },

    #[error("non-finite complex value ({re}, {im})")]
    NonFinite { re: f64, im: f64 },

    #[error("{points} points exceed the budget of {budget}")]
    Budget { points: u128, budget: u64 },

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("grid geometry mismatch")]
    GeometryMismatch,

    #[error("invalid viewport or grid size: {0}")]
    InvalidGeometry(&'static str),

    #[error("malformed point dump: {0}")]
    MalformedDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
