use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forecaster::Forecaster;
use crate::loss::alpha_loss;
use crate::types::{LossSpec, Round};

/// Per-round record of one forecaster run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    horizon: usize,
    observations: Vec<f64>,
    predictions: Vec<f64>,
    losses: Vec<f64>,
    cumulative: Vec<f64>,
    comparator: Option<f64>,
    bound: Option<f64>,
}

impl RegretTrace {
    pub fn new(horizon: usize) -> Self {
        RegretTrace {
            horizon,
            observations: Vec::with_capacity(horizon),
            predictions: Vec::with_capacity(horizon),
            losses: Vec::with_capacity(horizon),
            cumulative: Vec::with_capacity(horizon),
            comparator: None,
            bound: None,
        }
    }

    pub fn push(&mut self, y: f64, prediction: f64, loss: f64) {
        debug_assert!(loss >= 0.0);
        let prev = self.cumulative.last().copied().unwrap_or(0.0);
        self.observations.push(y);
        self.predictions.push(prediction);
        self.losses.push(loss);
        self.cumulative.push(prev + loss);
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.len() == self.horizon
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn predictions(&self) -> &[f64] {
        &self.predictions
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_loss(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn comparator_loss(&self) -> Option<f64> {
        self.comparator
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn set_comparator_loss(&mut self, loss: f64) {
        self.comparator = Some(loss);
    }

    pub fn set_bound(&mut self, bound: f64) {
        self.bound = Some(bound);
    }

    /// Regret after round `t` (0-based) against the recorded comparator loss.
    pub fn regret_at(&self, t: usize) -> Option<f64> {
        Some(self.cumulative.get(t)? - self.comparator?)
    }
}

/// `Σ losses - comparator_loss` over a complete trace.
pub fn compute_regret(trace: &RegretTrace, comparator_loss: f64) -> Result<f64> {
    if !trace.is_complete() {
        return Err(Error::IncompleteTrace { expected: trace.horizon(), found: trace.len() });
    }
    Ok(trace.total_loss() - comparator_loss)
}

/// Runs `forecaster` over `rounds` under the α-loss `spec`.
pub fn run_forecaster<F: Forecaster + ?Sized>(
    forecaster: &mut F,
    rounds: &[Round],
    spec: LossSpec,
) -> Result<RegretTrace> {
    let mut trace = RegretTrace::new(rounds.len());
    for round in rounds {
        let prediction = forecaster.predict(&round.x)?;
        forecaster.feed(round.y)?;
        trace.push(round.y, prediction, alpha_loss(round.y, prediction, spec));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecaster::NullForecaster;
    use alloc::vec;

    #[test]
    fn regret_examples() {
        let mut trace = RegretTrace::new(2);
        trace.push(0.0, 0.0, 2.0);
        trace.push(0.0, 0.0, 3.0);
        assert_eq!(compute_regret(&trace, 3.0).unwrap(), 2.0);
        assert_eq!(compute_regret(&trace, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn null_forecaster_regret_is_sum_of_squares() {
        let rounds: Vec<_> = (0..4).map(|_| Round::new(vec![1.0], 1.0).unwrap()).collect();
        let mut f = NullForecaster::new(1).unwrap();
        let trace = run_forecaster(&mut f, &rounds, LossSpec::SQUARE).unwrap();
        // u = 1 reproduces every observation exactly.
        assert_eq!(compute_regret(&trace, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn incomplete_trace_is_error() {
        let mut trace = RegretTrace::new(3);
        trace.push(1.0, 0.0, 1.0);
        assert_eq!(
            compute_regret(&trace, 0.0),
            Err(Error::IncompleteTrace { expected: 3, found: 1 })
        );
    }

    #[test]
    fn cumulative_is_partial_sum() {
        let mut trace = RegretTrace::new(3);
        for l in [0.5, 0.0, 1.25] {
            trace.push(0.0, 0.0, l);
        }
        assert_eq!(trace.cumulative(), &[0.5, 0.5, 1.75]);
        trace.set_comparator_loss(0.25);
        assert_eq!(trace.regret_at(2), Some(1.5));
    }
}
