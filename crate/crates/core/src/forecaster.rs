use alloc::vec::Vec;

use crate::error::{ensure_finite, Error, ProtocolError, Result};

/// A deterministic online forecaster.
///
/// Each round is one call to [`predict`](Forecaster::predict) with `x_t`
/// followed by exactly one call to [`feed`](Forecaster::feed) with `y_t`.
/// Breaking the alternation yields [`Error::Protocol`].
pub trait Forecaster: Send {
    fn dim(&self) -> usize;

    fn predict(&mut self, x: &[f64]) -> Result<f64>;

    fn feed(&mut self, y: f64) -> Result<()>;

    /// The comparator point `û_t` behind the last prediction, for forecasters
    /// that maintain one.
    fn point(&self) -> Option<&[f64]> {
        None
    }
}

impl<F: Forecaster + ?Sized> Forecaster for alloc::boxed::Box<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        (**self).predict(x)
    }
    fn feed(&mut self, y: f64) -> Result<()> {
        (**self).feed(y)
    }
    fn point(&self) -> Option<&[f64]> {
        (**self).point()
    }
}

/// Protocol bookkeeping shared by the forecasters: holds `x_t` between
/// `predict` and `feed`.
#[derive(Debug, Clone)]
pub(crate) struct Turn {
    dim: usize,
    x: Vec<f64>,
    open: bool,
}

impl Turn {
    pub(crate) fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Turn { dim, x: alloc::vec![0.0; dim], open: false })
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn begin(&mut self, x: &[f64]) -> Result<()> {
        if self.open {
            return Err(ProtocolError::StepTwice.into());
        }
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        ensure_finite("input", x)?;
        self.x.copy_from_slice(x);
        self.open = true;
        Ok(())
    }

    /// Closes the round and returns the stored input.
    pub(crate) fn finish(&mut self, y: f64) -> Result<&[f64]> {
        if !self.open {
            return Err(ProtocolError::FeedBeforeStep.into());
        }
        ensure_finite("observation", &[y])?;
        self.open = false;
        Ok(&self.x)
    }
}

/// Always predicts zero.
#[derive(Debug, Clone)]
pub struct NullForecaster {
    turn: Turn,
}

impl NullForecaster {
    pub fn new(dim: usize) -> Result<Self> {
        Ok(NullForecaster { turn: Turn::new(dim)? })
    }
}

impl Forecaster for NullForecaster {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        Ok(0.0)
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        self.turn.finish(y).map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_forecaster_predicts_zero() {
        let mut f = NullForecaster::new(2).unwrap();
        for t in 0..5 {
            assert_eq!(f.predict(&[t as f64, 1.0]).unwrap(), 0.0);
            f.feed(3.0).unwrap();
        }
        assert!(f.point().is_none());
    }

    #[test]
    fn protocol_violations() {
        let mut f = NullForecaster::new(1).unwrap();
        assert_eq!(f.feed(1.0), Err(Error::Protocol(ProtocolError::FeedBeforeStep)));
        f.predict(&[1.0]).unwrap();
        assert_eq!(f.predict(&[1.0]), Err(Error::Protocol(ProtocolError::StepTwice)));
        f.feed(0.0).unwrap();
        assert_eq!(f.feed(0.0), Err(Error::Protocol(ProtocolError::FeedBeforeStep)));
    }

    #[test]
    fn rejects_zero_dimension_and_drift() {
        assert!(NullForecaster::new(0).is_err());
        let mut f = NullForecaster::new(2).unwrap();
        assert!(matches!(f.predict(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }
}
