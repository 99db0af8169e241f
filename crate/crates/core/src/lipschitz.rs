//! Lipschitzified α-losses and the dyadic observation threshold.
//!
//! Given a threshold `B ≥ |y|`, the surrogate `ℓ̃(u)` equals `|y - u·x|^α`
//! while `|u·x| ≤ B` and continues along the tangent line outside, so it is
//! convex, C¹, and its gradient is bounded independently of `u`. Rounds with
//! `|y| > B` contribute the zero function.

use alloc::vec::Vec;

use crate::comparator::RoundLoss;
use crate::error::{ensure_finite, ensure_nonnegative, Result};
use crate::loss::{clip, sign};
use crate::math::{ceil, ceil_log2, dot, exp2, log2, pow};
use crate::types::{LossSpec, Round};

/// Running threshold `B = (2^k)^{1/α}` with `k = ⌈log₂ max|y|^α⌉`, stored
/// through the integer exponent `k` so the ratchet is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    alpha: f64,
    exponent: Option<i64>,
    y_max: f64,
}

impl Threshold {
    pub fn new(spec: LossSpec) -> Self {
        Threshold { alpha: spec.alpha(), exponent: None, y_max: 0.0 }
    }

    /// Current `B`; zero before any nonzero observation.
    pub fn value(&self) -> f64 {
        self.exponent.map_or(0.0, |k| exp2(k as f64 / self.alpha))
    }

    pub fn exponent(&self) -> Option<i64> {
        self.exponent
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    /// Folds `|y|` into the running maximum and ratchets `B`.
    pub fn observe(&mut self, y: f64) {
        let a = y.abs();
        if a <= self.y_max {
            return;
        }
        self.y_max = a;
        if self.value() >= a {
            return;
        }
        let k = dyadic_exponent(a, self.alpha);
        self.exponent = Some(self.exponent.map_or(k, |old| old.max(k)));
    }
}

/// Smallest integer `k` with `2^{k/α} ≥ v`, for `v > 0`.
fn dyadic_exponent(v: f64, alpha: f64) -> i64 {
    let p = pow(v, alpha);
    let mut k = if p.is_finite() && p > 0.0 {
        ceil_log2(p) as i64
    } else {
        ceil(alpha * log2(v)) as i64
    };
    while exp2(k as f64 / alpha) < v {
        k += 1;
    }
    k
}

/// `(2^{⌈log₂ y_max^α⌉})^{1/α}`, or zero when `y_max = 0`, ratcheted so
/// the result never drops below `prev`.
pub fn update_threshold(prev: f64, y_max: f64, alpha: f64) -> Result<f64> {
    ensure_nonnegative("prev", prev)?;
    ensure_nonnegative("y_max", y_max)?;
    let spec = LossSpec::new(alpha)?;
    if y_max == 0.0 {
        return Ok(prev);
    }
    Ok(prev.max(exp2(dyadic_exponent(y_max, spec.alpha()) as f64 / spec.alpha())))
}

/// One round's Lipschitzified α-loss.
#[derive(Debug, Clone, PartialEq)]
pub struct LipLoss {
    pub y: f64,
    pub x: Vec<f64>,
    pub bound: f64,
    pub alpha: f64,
}

impl LipLoss {
    pub fn new(x: Vec<f64>, y: f64, bound: f64, spec: LossSpec) -> Result<Self> {
        ensure_nonnegative("bound", bound)?;
        ensure_finite("lipschitzified loss data", &x)?;
        ensure_finite("lipschitzified loss data", &[y])?;
        Ok(LipLoss { y, x, bound, alpha: spec.alpha() })
    }

    /// `false` iff `|y| > B`, in which case the loss is identically zero.
    pub fn is_active(&self) -> bool {
        self.y.abs() <= self.bound
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.value_at(dot(u, &self.x))
    }

    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let s = self.slope_at(dot(u, &self.x));
        self.x.iter().map(|xj| s * xj).collect()
    }

    fn residual_power(&self, r: f64, e: f64) -> f64 {
        if e == 1.0 {
            r
        } else if e == 2.0 {
            r * r
        } else {
            pow(r, e)
        }
    }
}

impl RoundLoss for LipLoss {
    fn input(&self) -> &[f64] {
        &self.x
    }

    fn value_at(&self, v: f64) -> f64 {
        if !self.is_active() {
            return 0.0;
        }
        let (a, b, y) = (self.alpha, self.bound, self.y);
        if v > b {
            let r = (y - b).abs();
            self.residual_power(r, a) + a * self.residual_power(r, a - 1.0) * (v - b)
        } else if v < -b {
            let r = (y + b).abs();
            self.residual_power(r, a) - a * self.residual_power(r, a - 1.0) * (v + b)
        } else {
            self.residual_power((y - v).abs(), a)
        }
    }

    fn slope_at(&self, v: f64) -> f64 {
        if !self.is_active() {
            return 0.0;
        }
        let r = self.y - clip(v, self.bound);
        -self.alpha * sign(r) * self.residual_power(r.abs(), self.alpha - 1.0)
    }

    fn curvature_at(&self, v: f64) -> f64 {
        if !self.is_active() || v.abs() > self.bound {
            return 0.0;
        }
        let a = self.alpha;
        a * (a - 1.0) * pow((self.y - v).abs(), a - 2.0)
    }
}

/// The surrogate losses built causally along `rounds`: round `t` uses the
/// threshold computed from `|y_1|, …, |y_{t-1}|`.
pub fn lipschitzified_losses(rounds: &[Round], spec: LossSpec) -> Result<Vec<LipLoss>> {
    let mut threshold = Threshold::new(spec);
    let mut out = Vec::with_capacity(rounds.len());
    for r in rounds {
        out.push(LipLoss::new(r.x.clone(), r.y, threshold.value(), spec)?);
        threshold.observe(r.y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{alpha_loss, square_loss_gradient};
    use alloc::vec;

    fn lip(x: &[f64], y: f64, bound: f64, alpha: f64) -> LipLoss {
        LipLoss::new(x.to_vec(), y, bound, LossSpec::new(alpha).unwrap()).unwrap()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(update_threshold(0.0, 1.5, 2.0).unwrap(), 2.0);
        assert_eq!(update_threshold(0.0, 1.0, 2.0).unwrap(), 1.0);
        assert_eq!(update_threshold(0.0, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(update_threshold(2.0, 1.5, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn threshold_sandwich() {
        for alpha in [2.0, 2.5, 3.0, 4.0] {
            let mut v = 1e-6;
            while v < 1e6 {
                let b = update_threshold(0.0, v, alpha).unwrap();
                assert!(b >= v, "{v} {alpha}");
                assert!(b <= exp2(1.0 / alpha) * v * (1.0 + 1e-15), "{v} {alpha}");
                v *= 1.37;
            }
        }
    }

    #[test]
    fn threshold_ratchet() {
        let mut t = Threshold::new(LossSpec::SQUARE);
        assert_eq!(t.value(), 0.0);
        t.observe(1.5);
        assert_eq!(t.value(), 2.0);
        t.observe(-0.1);
        assert_eq!(t.value(), 2.0);
        t.observe(1.9);
        assert_eq!(t.value(), 2.0);
        t.observe(2.5);
        assert_eq!(t.exponent(), Some(3));
    }

    #[test]
    fn eval_examples() {
        assert!((lip(&[1.0], 0.0, 1.0, 2.0).eval(&[0.5]) - 0.25).abs() < 1e-15);
        assert!((lip(&[1.0], 0.0, 1.0, 2.0).eval(&[2.0]) - 3.0).abs() < 1e-15);
        let inactive = lip(&[1.0, 2.0], 3.0, 1.0, 3.0);
        assert!(!inactive.is_active());
        assert_eq!(inactive.eval(&[5.0, -1.0]), 0.0);
        assert_eq!(inactive.gradient(&[5.0, -1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn interior_gradient_is_square_gradient() {
        let l = lip(&[0.3, -0.2], 0.4, 1.0, 2.0);
        let u = [0.5, 0.25];
        let r = Round::new(l.x.clone(), l.y).unwrap();
        let g = square_loss_gradient(&u, &r).unwrap();
        for (a, b) in l.gradient(&u).iter().zip(&g) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_branch_has_constant_gradient() {
        let l = lip(&[1.0], 0.5, 1.0, 3.0);
        assert_eq!(l.gradient(&[2.0]), l.gradient(&[3.0]));
    }

    #[test]
    fn junction_is_c1() {
        for alpha in [2.0, 3.0, 4.0] {
            for y in [-0.9, 0.0, 0.7] {
                let l = lip(&[1.0], y, 1.0, alpha);
                for b in [1.0, -1.0] {
                    let h = 1e-10;
                    let (v0, s0) = (l.value_at(b), l.slope_at(b));
                    assert!((l.value_at(b - h) - (v0 - h * s0)).abs() < 1e-9);
                    assert!((l.value_at(b + h) - (v0 + h * s0)).abs() < 1e-9);
                    assert!((l.slope_at(b - h) - l.slope_at(b + h)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn sandwich_on_fixed_points() {
        let spec = LossSpec::new(3.0).unwrap();
        let l = lip(&[1.0], 0.5, 1.0, 3.0);
        for v in [-3.0, -1.0, -0.2, 0.5, 1.0, 2.5] {
            let lo = alpha_loss(0.5, clip(v, 1.0), spec);
            let hi = alpha_loss(0.5, v, spec);
            let mid = l.value_at(v);
            assert!(lo <= mid + 1e-12 && mid <= hi + 1e-12);
        }
    }

    #[test]
    fn causal_thresholds() {
        let rounds: Vec<_> = [1.5, 0.5, 3.0]
            .iter()
            .map(|&y| Round::new(vec![1.0], y).unwrap())
            .collect();
        let losses = lipschitzified_losses(&rounds, LossSpec::SQUARE).unwrap();
        let bounds: Vec<f64> = losses.iter().map(|l| l.bound).collect();
        assert_eq!(bounds, vec![0.0, 2.0, 2.0]);
        assert!(!losses[0].is_active());
        assert!(losses[1].is_active());
        assert!(!losses[2].is_active());
    }
}
