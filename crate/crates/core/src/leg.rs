//! Lipschitzifying exponentiated gradient: adaptive EG± run on the
//! Lipschitzified α-losses, with predictions clipped to the current
//! threshold `B_t`.

use crate::adaptive_eg::EgState;
use crate::error::Result;
use crate::forecaster::{Forecaster, Turn};
use crate::lipschitz::{LipLoss, Threshold};
use crate::loss::clip;
use crate::math::dot;
use crate::types::LossSpec;

#[derive(Debug, Clone)]
pub struct Leg {
    turn: Turn,
    eg: EgState,
    threshold: Threshold,
    spec: LossSpec,
}

impl Leg {
    pub fn new(radius: f64, d: usize, spec: LossSpec) -> Result<Self> {
        Ok(Leg {
            turn: Turn::new(d)?,
            eg: EgState::new(radius, d)?,
            threshold: Threshold::new(spec),
            spec,
        })
    }

    pub fn state(&self) -> &EgState {
        &self.eg
    }

    /// `B_t` for the next prediction.
    pub fn threshold(&self) -> f64 {
        self.threshold.value()
    }

    pub fn radius(&self) -> f64 {
        self.eg.radius()
    }
}

impl Forecaster for Leg {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        Ok(clip(dot(self.eg.point(), x), self.threshold.value()))
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        let x = self.turn.finish(y)?.to_vec();
        let loss = LipLoss::new(x, y, self.threshold.value(), self.spec)?;
        let grad = loss.gradient(self.eg.point());
        self.eg.update(&grad)?;
        self.threshold.observe(y);
        Ok(())
    }

    fn point(&self) -> Option<&[f64]> {
        Some(self.eg.point())
    }
}
