//! Exponentially weighted average of clipped expert predictions under the
//! square loss.
//!
//! Expert `k` gets weight `∝ exp(-η L_k)` where `L_k` is its cumulative loss
//! `Σ (y_s - [ŷ_s^{(k)}]_Y)²`. With `η ≤ 1/(8Y²)` and `|y_t| ≤ Y` the
//! aggregate suffers at most `ln K / η` more than the best expert.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_finite, ensure_nonnegative, ensure_positive, Error, Result};
use crate::loss::clip;
use crate::math::exp;

#[derive(Debug, Clone, PartialEq)]
pub struct Ewa {
    eta: f64,
    clip_bound: f64,
    cumulative: Vec<f64>,
}

impl Ewa {
    pub fn new(experts: usize, eta: f64, clip_bound: f64) -> Result<Self> {
        if experts == 0 {
            return Err(Error::ExpertCount { expected: 1, found: 0 });
        }
        ensure_positive("eta", eta)?;
        ensure_nonnegative("clip_bound", clip_bound)?;
        Ok(Ewa { eta, clip_bound, cumulative: vec![0.0; experts] })
    }

    /// `η = 1/(8Y²)` and clipping at `Y`.
    pub fn tuned(experts: usize, y_bound: f64) -> Result<Self> {
        ensure_positive("y_bound", y_bound)?;
        Self::new(experts, 1.0 / (8.0 * y_bound * y_bound), y_bound)
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn clip_bound(&self) -> f64 {
        self.clip_bound
    }

    pub fn set_eta(&mut self, eta: f64) -> Result<()> {
        ensure_positive("eta", eta)?;
        self.eta = eta;
        Ok(())
    }

    pub fn set_clip_bound(&mut self, clip_bound: f64) -> Result<()> {
        ensure_nonnegative("clip_bound", clip_bound)?;
        self.clip_bound = clip_bound;
        Ok(())
    }

    pub fn cumulative_losses(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn min_cumulative(&self) -> f64 {
        self.cumulative.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Appends an expert with the given starting cumulative loss.
    pub fn insert_expert(&mut self, initial_loss: f64) -> Result<()> {
        ensure_nonnegative("initial_loss", initial_loss)?;
        self.cumulative.push(initial_loss);
        Ok(())
    }

    /// Sets every cumulative loss to zero.
    pub fn reset(&mut self) {
        self.cumulative.iter_mut().for_each(|l| *l = 0.0);
    }

    pub fn weights(&self) -> Vec<f64> {
        let lo = self.min_cumulative();
        let mut w: Vec<f64> = self.cumulative.iter().map(|l| exp(-self.eta * (l - lo))).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        w
    }

    fn check(&self, predictions: &[f64]) -> Result<()> {
        if predictions.len() != self.len() {
            return Err(Error::ExpertCount { expected: self.len(), found: predictions.len() });
        }
        ensure_finite("expert predictions", predictions)
    }

    /// `Σ_k p_k [ŷ^{(k)}]_Y`, itself in `[-Y, Y]`.
    pub fn predict(&self, predictions: &[f64]) -> Result<f64> {
        self.check(predictions)?;
        let p: f64 = self
            .weights()
            .iter()
            .zip(predictions)
            .map(|(w, v)| w * clip(*v, self.clip_bound))
            .sum();
        Ok(clip(p, self.clip_bound))
    }

    /// Charges each expert its clipped square loss on `y`.
    pub fn feed(&mut self, predictions: &[f64], y: f64) -> Result<()> {
        self.check(predictions)?;
        ensure_finite("observation", &[y])?;
        for (l, v) in self.cumulative.iter_mut().zip(predictions) {
            let r = y - clip(*v, self.clip_bound);
            *l += r * r;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_expert_is_clipped_prediction() {
        let e = Ewa::tuned(1, 1.0).unwrap();
        assert_eq!(e.predict(&[0.3]).unwrap(), 0.3);
        assert_eq!(e.predict(&[4.0]).unwrap(), 1.0);
    }

    #[test]
    fn uniform_weights_average() {
        let e = Ewa::tuned(3, 1.0).unwrap();
        let p = e.predict(&[0.3, -0.6, 9.0]).unwrap();
        assert!((p - (0.3 - 0.6 + 1.0) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_expert_example() {
        let mut e = Ewa::new(2, 0.125, 1.0).unwrap();
        e.cumulative = vec![0.0, 10.0];
        let w = e.weights();
        let w1 = 1.0 / (1.0 + exp(-10.0 / 8.0));
        assert!((w[0] - w1).abs() < 1e-12);
        assert!((w[0] - 0.7773).abs() < 1e-4);
        let p = e.predict(&[1.0, -1.0]).unwrap();
        assert!((p - 0.5546).abs() < 1e-4);
    }

    #[test]
    fn feed_clips_before_loss() {
        let mut e = Ewa::tuned(2, 1.0).unwrap();
        e.feed(&[5.0, 1.0], 1.0).unwrap();
        assert_eq!(e.cumulative_losses(), &[0.0, 0.0]);
    }

    #[test]
    fn expert_count_checked() {
        let mut e = Ewa::tuned(2, 1.0).unwrap();
        assert!(matches!(e.predict(&[1.0]), Err(Error::ExpertCount { expected: 2, found: 1 })));
        assert!(e.feed(&[1.0, f64::NAN], 0.0).is_err());
        assert!(Ewa::tuned(0, 1.0).is_err());
    }

    #[test]
    fn zero_clip_predicts_zero() {
        let e = Ewa::new(2, 1.0, 0.0).unwrap();
        assert_eq!(e.predict(&[3.0, -2.0]).unwrap(), 0.0);
    }

    #[test]
    fn weights_match_ratio_definition() {
        let mut e = Ewa::new(3, 0.3, 1.0).unwrap();
        e.cumulative = vec![1.0, 2.5, 0.2];
        let z: f64 = e.cumulative.iter().map(|l| exp(-0.3 * l)).sum();
        for (w, l) in e.weights().iter().zip(&e.cumulative) {
            assert!((w - exp(-0.3 * l) / z).abs() < 1e-12);
        }
    }
}
