use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, Result};
use crate::math::norm_inf;

/// One element `(x_t, y_t)` of the stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub x: Vec<f64>,
    pub y: f64,
}

impl Round {
    pub fn new(x: Vec<f64>, y: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyDimension);
        }
        ensure_finite("round input", &x)?;
        ensure_finite("round observation", &[y])?;
        Ok(Round { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Checks that the stream is nonempty with a fixed dimension, and returns it.
pub fn stream_dimension(rounds: &[Round]) -> Result<usize> {
    let first = rounds.first().ok_or(Error::EmptyStream)?;
    let d = first.dim();
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    for r in rounds {
        if r.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: r.dim() });
        }
    }
    Ok(d)
}

/// Sup-norm bound on inputs, bound on observations, and horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamBounds {
    pub x_max: f64,
    pub y_max: f64,
    pub horizon: usize,
}

impl StreamBounds {
    /// Realized bounds `X = max ‖x_t‖∞`, `Y = max |y_t|`, `T = len`.
    pub fn from_rounds(rounds: &[Round]) -> Result<Self> {
        stream_dimension(rounds)?;
        let x_max = rounds.iter().fold(0.0f64, |m, r| m.max(norm_inf(&r.x)));
        let y_max = rounds.iter().fold(0.0f64, |m, r| m.max(r.y.abs()));
        Ok(StreamBounds { x_max, y_max, horizon: rounds.len() })
    }

    /// True when every round satisfies `‖x_t‖∞ ≤ x_max` and `|y_t| ≤ y_max`.
    pub fn admits(&self, rounds: &[Round]) -> bool {
        rounds
            .iter()
            .all(|r| norm_inf(&r.x) <= self.x_max && r.y.abs() <= self.y_max)
    }
}

/// Exponent of the α-loss `|y - p|^α`, with `α ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    alpha: f64,
}

impl LossSpec {
    pub const SQUARE: LossSpec = LossSpec { alpha: 2.0 };

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha >= 2.0 {
            Ok(LossSpec { alpha })
        } else {
            Err(Error::InvalidParameter { name: "alpha", value: alpha })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_square(&self) -> bool {
        self.alpha == 2.0
    }
}

impl Default for LossSpec {
    fn default() -> Self {
        LossSpec::SQUARE
    }
}
