use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{dot, pow};
use crate::types::{LossSpec, Round};

/// Projection of `v` onto `[-bound, bound]`.
#[inline]
pub fn clip(v: f64, bound: f64) -> f64 {
    debug_assert!(bound >= 0.0);
    v.max(-bound).min(bound)
}

/// `|y - p|^α`.
#[inline]
pub fn alpha_loss(y: f64, p: f64, spec: LossSpec) -> f64 {
    let r = (y - p).abs();
    if spec.is_square() {
        r * r
    } else {
        pow(r, spec.alpha())
    }
}

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Gradient in `u` of `(y - u·x)²`, i.e. `-2 (y - u·x) x`.
pub fn square_loss_gradient(u: &[f64], round: &Round) -> Result<Vec<f64>> {
    if u.len() != round.dim() {
        return Err(Error::DimensionMismatch { expected: round.dim(), found: u.len() });
    }
    let scale = -2.0 * (round.y - dot(u, &round.x));
    Ok(round.x.iter().map(|xj| scale * xj).collect())
}
