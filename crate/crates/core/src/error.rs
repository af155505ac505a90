use thiserror::Error;

/// Failures shared by the arithmetic, search and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a square")]
    NotASquare,

    /// Every visible digit is zero; the value is only known to be `O(2^at_least)`
    /// (or `O(P^at_least)` for tower elements).
    #[error("precision exhausted (value is zero to precision {at_least})")]
    PrecisionExhausted { at_least: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero argument")]
    ZeroInput,

    #[error("no solution within search bound {bound}")]
    NotFound { bound: u64 },

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("ideal is not principal at exponent {m}")]
    NotPrincipalAtThisExponent { m: u32 },

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("span mismatch: {0}")]
    SpanMismatch(String),

    #[error("torsion detected in the quotient (divisor valuation {valuation})")]
    TorsionDetected { valuation: i64 },

    #[error("anomaly: {0}")]
    Anomaly(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
