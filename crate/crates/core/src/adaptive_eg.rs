//! Exponentiated gradient over the signed vertices of `B₁(U)` with a
//! self-confident learning rate.
//!
//! Vertex `2j` is `+U e_j` and vertex `2j + 1` is `-U e_j`. After round `t`
//! the loss vector `z = (U ∇_j, -U ∇_j)_j` is folded into per-vertex sums and
//! the next weights are `softmax(-η_{t+1} · sums)` with
//! `η_{t+1} = min{1/Ê_t, C √(ln(2d)/V_t)}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::forecaster::{Forecaster, Turn};
use crate::loss::square_loss_gradient;
use crate::math::{ceil_log2, dot, exp, log, norm_inf, pow2, sqrt};
use crate::types::Round;

/// `√(2(√2 - 1)/(e - 2))`.
pub const TUNING_C: f64 = 1.073_939_250_677_852_2;

/// Probability vector over the `2d` signed vertices, interleaved as
/// `(p⁺_1, p⁻_1, …, p⁺_d, p⁻_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights {
    p: Vec<f64>,
}

impl VertexWeights {
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(VertexWeights { p: vec![1.0 / (2 * d) as f64; 2 * d] })
    }

    /// Validates nonnegativity, even length and unit mass (within `1e-12`).
    pub fn from_vec(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || !p.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: 2 * (p.len() / 2).max(1), found: p.len() });
        }
        ensure_finite("vertex weights", &p)?;
        let total: f64 = p.iter().sum();
        if p.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter { name: "vertex weights total", value: total });
        }
        Ok(VertexWeights { p })
    }

    pub fn dim(&self) -> usize {
        self.p.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn plus(&self, j: usize) -> f64 {
        self.p[2 * j]
    }

    pub fn minus(&self, j: usize) -> f64 {
        self.p[2 * j + 1]
    }

    /// `U Σ_j (p⁺_j - p⁻_j) e_j`.
    pub fn point(&self, radius: f64) -> Vec<f64> {
        self.p.chunks_exact(2).map(|w| radius * (w[0] - w[1])).collect()
    }

    fn set_uniform(&mut self) {
        let w = 1.0 / self.p.len() as f64;
        self.p.iter_mut().for_each(|p| *p = w);
    }

    /// `softmax(-eta · sums)`, shifted by the minimum sum.
    fn set_softmax(&mut self, eta: f64, sums: &[f64]) {
        let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
        let mut total = 0.0;
        for (p, s) in self.p.iter_mut().zip(sums) {
            *p = exp(-eta * (s - lo));
            total += *p;
        }
        self.p.iter_mut().for_each(|p| *p /= total);
    }
}

/// `z = (U g_1, -U g_1, …, U g_d, -U g_d)`.
pub fn loss_vector(grad: &[f64], radius: f64) -> Vec<f64> {
    grad.iter().flat_map(|g| [radius * g, -radius * g]).collect()
}

/// Self-confident tuning: dyadic range estimate `Ê`, cumulative weighted
/// variance `V`, and the resulting learning rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningState {
    range_max: f64,
    e_hat: f64,
    variance: f64,
    eta: f64,
}

impl Default for TuningState {
    fn default() -> Self {
        TuningState { range_max: 0.0, e_hat: 0.0, variance: 0.0, eta: f64::INFINITY }
    }
}

impl TuningState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero, or the smallest power of two covering every observed range.
    pub fn e_hat(&self) -> f64 {
        self.e_hat
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Largest observed `max z - min z`.
    pub fn range_max(&self) -> f64 {
        self.range_max
    }

    /// Learning rate for the next round; `+∞` while both branches are degenerate.
    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Folds one loss vector `z` into the tuning state, using the weights that
/// were played this round.
pub fn update_tuning(tuning: &mut TuningState, z: &[f64], weights: &VertexWeights) {
    debug_assert_eq!(z.len(), weights.as_slice().len());
    let p = weights.as_slice();
    let (lo, hi) = z
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if range > tuning.range_max {
        tuning.range_max = range;
        tuning.e_hat = pow2(ceil_log2(range));
    }
    let mean = dot(p, z);
    tuning.variance += p.iter().zip(z).map(|(w, v)| w * (v - mean) * (v - mean)).sum::<f64>();

    let by_range = if tuning.e_hat > 0.0 { 1.0 / tuning.e_hat } else { f64::INFINITY };
    let by_variance = if tuning.variance > 0.0 {
        TUNING_C * sqrt(log(z.len() as f64) / tuning.variance)
    } else {
        f64::INFINITY
    };
    tuning.eta = by_range.min(by_variance);
}

/// Full state of the EG± algorithm on `B₁(U)`.
#[derive(Debug, Clone)]
pub struct EgState {
    radius: f64,
    weights: VertexWeights,
    tuning: TuningState,
    sums: Vec<f64>,
    fixed_eta: Option<f64>,
    point: Vec<f64>,
    grad_sq_sum: f64,
    grad_max: f64,
    rounds: usize,
}

impl EgState {
    /// Adaptive tuning.
    pub fn new(radius: f64, d: usize) -> Result<Self> {
        ensure_positive("radius", radius)?;
        let weights = VertexWeights::uniform(d)?;
        Ok(EgState {
            radius,
            weights,
            tuning: TuningState::new(),
            sums: vec![0.0; 2 * d],
            fixed_eta: None,
            point: vec![0.0; d],
            grad_sq_sum: 0.0,
            grad_max: 0.0,
            rounds: 0,
        })
    }

    /// Constant learning rate `eta`; the tuning state is still tracked.
    pub fn with_fixed_eta(radius: f64, d: usize, eta: f64) -> Result<Self> {
        ensure_positive("eta", eta)?;
        let mut state = Self::new(radius, d)?;
        state.fixed_eta = Some(eta);
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `û = U Σ_j (p⁺_j - p⁻_j) e_j`.
    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn weights(&self) -> &VertexWeights {
        &self.weights
    }

    pub fn tuning(&self) -> &TuningState {
        &self.tuning
    }

    pub fn cumulative_losses(&self) -> &[f64] {
        &self.sums
    }

    /// Learning rate that produced the current weights.
    pub fn eta(&self) -> f64 {
        self.fixed_eta.unwrap_or(self.tuning.eta)
    }

    /// `Σ_t ‖g_t‖∞²` over the gradients fed so far.
    pub fn grad_sq_sum(&self) -> f64 {
        self.grad_sq_sum
    }

    /// `max_t ‖g_t‖∞`.
    pub fn grad_max(&self) -> f64 {
        self.grad_max
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// One EG± step with the gradient evaluated at [`point`](Self::point).
    pub fn update(&mut self, grad: &[f64]) -> Result<()> {
        if grad.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: grad.len() });
        }
        ensure_finite("gradient", grad)?;
        let g_inf = norm_inf(grad);
        self.grad_sq_sum += g_inf * g_inf;
        self.grad_max = self.grad_max.max(g_inf);
        self.rounds += 1;

        let z = loss_vector(grad, self.radius);
        update_tuning(&mut self.tuning, &z, &self.weights);
        for (s, v) in self.sums.iter_mut().zip(&z) {
            *s += v;
        }
        let eta = self.eta();
        if eta.is_finite() {
            self.weights.set_softmax(eta, &self.sums);
        } else {
            self.weights.set_uniform();
        }
        self.point = self.weights.point(self.radius);
        Ok(())
    }
}

/// Adaptive EG± on the square losses `u ↦ (y_t - u·x_t)²`.
#[derive(Debug, Clone)]
pub struct AdaptiveEgSquare {
    turn: Turn,
    eg: EgState,
}

impl AdaptiveEgSquare {
    pub fn new(radius: f64, d: usize) -> Result<Self> {
        Ok(AdaptiveEgSquare { turn: Turn::new(d)?, eg: EgState::new(radius, d)? })
    }

    pub fn with_fixed_eta(radius: f64, d: usize, eta: f64) -> Result<Self> {
        Ok(AdaptiveEgSquare { turn: Turn::new(d)?, eg: EgState::with_fixed_eta(radius, d, eta)? })
    }

    pub fn state(&self) -> &EgState {
        &self.eg
    }
}

impl Forecaster for AdaptiveEgSquare {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        Ok(dot(self.eg.point(), x))
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        let x = self.turn.finish(y)?.to_vec();
        let grad = square_loss_gradient(self.eg.point(), &Round { x, y })?;
        self.eg.update(&grad)
    }

    fn point(&self) -> Option<&[f64]> {
        Some(self.eg.point())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::norm1;

    #[test]
    fn tuning_constant_matches_formula() {
        let c = sqrt(2.0 * (sqrt(2.0) - 1.0) / (core::f64::consts::E - 2.0));
        assert!((TUNING_C - c).abs() < 1e-15);
    }

    #[test]
    fn point_examples() {
        assert_eq!(VertexWeights::uniform(3).unwrap().point(1.0), vec![0.0; 3]);
        let w = VertexWeights::from_vec(vec![1.0, 0.0]).unwrap();
        assert_eq!(w.point(2.0), vec![2.0]);
        let w = VertexWeights::from_vec(vec![0.5, 0.0, 0.25, 0.25]).unwrap();
        assert_eq!(w.point(1.0), vec![0.5, 0.0]);
    }

    #[test]
    fn loss_vector_examples() {
        assert_eq!(loss_vector(&[1.0, -2.0], 1.0), vec![1.0, -1.0, -2.0, 2.0]);
        assert_eq!(loss_vector(&[0.0, 0.0], 3.0), vec![0.0; 4]);
        let z = loss_vector(&[3.0], 2.0);
        let range = z.iter().cloned().fold(f64::MIN, f64::max) - z.iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(range, 12.0);
    }

    #[test]
    fn tuning_examples() {
        let w = VertexWeights::uniform(1).unwrap();
        let mut t = TuningState::new();
        update_tuning(&mut t, &[1.5, -1.5], &w);
        assert_eq!(t.e_hat(), 4.0);
        assert_eq!(t.variance(), 2.25);

        let mut t = TuningState::new();
        update_tuning(&mut t, &[1.0, -1.0], &w);
        assert_eq!(t.variance(), 1.0);
        let before = t;
        update_tuning(&mut t, &[0.0, 0.0], &w);
        assert_eq!(t.e_hat(), before.e_hat());
        assert_eq!(t.variance(), before.variance());
    }

    #[test]
    fn degenerate_tuning_keeps_sentinel() {
        let mut eg = EgState::new(1.0, 2).unwrap();
        for _ in 0..5 {
            eg.update(&[0.0, 0.0]).unwrap();
        }
        assert!(eg.eta().is_infinite());
        assert_eq!(eg.point(), &[0.0, 0.0]);
    }

    #[test]
    fn one_round_example() {
        let mut eg = EgState::new(1.0, 1).unwrap();
        eg.update(&[2.0]).unwrap();
        assert_eq!(eg.tuning().e_hat(), 4.0);
        assert_eq!(eg.tuning().variance(), 4.0);
        assert_eq!(eg.eta(), 0.25);
        let expected = exp(-0.5) / (exp(-0.5) + exp(0.5));
        assert!((eg.weights().plus(0) - expected).abs() < 1e-15);
        assert!(eg.weights().minus(0) > eg.weights().plus(0));
    }

    #[test]
    fn first_prediction_is_zero() {
        let mut f = AdaptiveEgSquare::new(1.0, 3).unwrap();
        assert_eq!(f.predict(&[1.0, -2.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn fixed_eta_mode() {
        let mut eg = EgState::with_fixed_eta(1.0, 1, 0.1).unwrap();
        eg.update(&[1.0]).unwrap();
        assert_eq!(eg.eta(), 0.1);
        let expected = 1.0 / (1.0 + exp(0.2));
        assert!((eg.weights().plus(0) - expected).abs() < 1e-15);
    }

    #[test]
    fn point_stays_in_ball() {
        let mut eg = EgState::new(2.5, 4).unwrap();
        for t in 0..200 {
            let g: Vec<f64> = (0..4).map(|j| crate::math::sin((t * 7 + j * 3) as f64)).collect();
            eg.update(&g).unwrap();
            assert!(norm1(eg.point()) <= 2.5 + 1e-12);
            let total: f64 = eg.weights().as_slice().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_gradients() {
        let mut eg = EgState::new(1.0, 2).unwrap();
        assert!(eg.update(&[f64::NAN, 0.0]).is_err());
        assert!(eg.update(&[1.0]).is_err());
        assert!(EgState::new(0.0, 2).is_err());
    }
}
