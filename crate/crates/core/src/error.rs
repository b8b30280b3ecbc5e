use thiserror::Error;

/// Validation failures for domain values and models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amount is not finite: {0}")]
    NonFinite(f64),
    #[error("year {0} outside [1900, 2200]")]
    YearOutOfRange(i32),
    #[error("rate {0} must be finite and greater than -1")]
    RateOutOfRange(f64),
    #[error("horizon start {start} is after end {end}")]
    InvertedHorizon { start: i32, end: i32 },
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{what} must not be negative, got {value}")]
    Negative { what: &'static str, value: f64 },
    #[error("event period must be at least one year")]
    ZeroPeriod,
    #[error("period must be at least one year")]
    ZeroYears,
    #[error("asset name must not be empty")]
    EmptyAssetName,
    #[error("duplicate asset name {0:?}")]
    DuplicateAsset(String),
    #[error("{what} year {year} lies outside horizon {start}-{end}")]
    OutsideHorizon {
        what: String,
        year: i32,
        start: i32,
        end: i32,
    },
    #[error("income multipliers must satisfy low <= 1 <= high (low {low}, high {high})")]
    BadMultipliers { low: f64, high: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
