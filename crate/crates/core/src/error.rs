use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Violation of the predict/feed alternation of the online protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolError {
    /// `predict` was called while a previous prediction still awaits its observation.
    StepTwice,
    /// `feed` was called without a pending prediction.
    FeedBeforeStep,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyDimension,
    DimensionMismatch { expected: usize, found: usize },
    NonFinite(&'static str),
    InvalidParameter { name: &'static str, value: f64 },
    Protocol(ProtocolError),
    IncompleteTrace { expected: usize, found: usize },
    EmptyStream,
    NotConverged { gap: f64, iterations: usize },
    /// Inputs fall outside the middle regime required by the Maurey forecaster.
    Regime { inequality: &'static str, lhs: f64, rhs: f64 },
    GridTooLarge { cardinality: f64, bound: f64, cap: usize },
    ExpertCount { expected: usize, found: usize },
    NormTooLarge { norm: f64, limit: f64 },
    /// A sub-forecaster of an aggregate failed; `radius` identifies it.
    Sub { radius: f64, source: alloc::boxed::Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyDimension => write!(f, "input dimension must be at least 1"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::Protocol(ProtocolError::StepTwice) => {
                write!(f, "protocol error: predict called twice without feed")
            }
            Error::Protocol(ProtocolError::FeedBeforeStep) => {
                write!(f, "protocol error: feed called before predict")
            }
            Error::IncompleteTrace { expected, found } => {
                write!(f, "incomplete trace: {found} of {expected} rounds recorded")
            }
            Error::EmptyStream => write!(f, "stream has no rounds"),
            Error::NotConverged { gap, iterations } => {
                write!(f, "comparator did not converge: gap {gap:e} after {iterations} iterations")
            }
            Error::Regime { inequality, lhs, rhs } => {
                write!(f, "outside the middle regime: {inequality} violated ({lhs} vs {rhs})")
            }
            Error::GridTooLarge { cardinality, bound, cap } => write!(
                f,
                "grid has {cardinality} points (combinatorial bound {bound:.3e}), above the cap of {cap}"
            ),
            Error::ExpertCount { expected, found } => {
                write!(f, "expected {expected} expert predictions, got {found}")
            }
            Error::NormTooLarge { norm, limit } => {
                write!(f, "l1 norm {norm} exceeds the limit {limit}")
            }
            Error::Sub { radius, source } => write!(f, "sub-forecaster at radius {radius}: {source}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ProtocolError> for Error {
    fn from(e: ProtocolError) -> Self {
        Error::Protocol(e)
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

pub(crate) fn ensure_finite(what: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
