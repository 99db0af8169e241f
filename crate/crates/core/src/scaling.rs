//! Adaptation to an unknown radius: clipped EWA over sub-forecasters run on
//! a dyadic grid of radii, and a fully adaptive variant whose grid grows
//! with time and whose clipping level tracks the observations.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_positive, Error, Result};
use crate::ewa::Ewa;
use crate::forecaster::{Forecaster, Turn};
use crate::leg::Leg;
use crate::lipschitz::Threshold;
use crate::math::{ceil, ceil_log2, ceil_log2_plus, floor, log, log2, pow, pow2, sqrt};
use crate::types::LossSpec;

/// Radii `U_0 < U_1 < … < U_R` with `U_{r+1} = 2 U_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct UGrid {
    radii: Vec<f64>,
}

impl UGrid {
    fn dyadic(first: f64, count: usize) -> Self {
        let mut radii = Vec::with_capacity(count);
        let mut u = first;
        for _ in 0..count {
            radii.push(u);
            u *= 2.0;
        }
        UGrid { radii }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Index `R` of the largest radius.
    pub fn top_index(&self) -> usize {
        self.radii.len() - 1
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::EmptyDimension)
    } else {
        Ok(())
    }
}

fn check_horizon(t: usize) -> Result<()> {
    if t == 0 {
        Err(Error::InvalidParameter { name: "horizon", value: 0.0 })
    } else {
        Ok(())
    }
}

/// `R = ⌈log₂(2T/c)⌉₊`.
pub fn grid_top_index(horizon: usize, c: f64) -> usize {
    ceil_log2_plus(2.0 * horizon as f64 / c)
}

/// `U_r = (Y/X) 2^r / √(T ln(2d))` for `r = 0..=R`.
pub fn build_grid(x_max: f64, y_max: f64, horizon: usize, d: usize, c: f64) -> Result<UGrid> {
    ensure_positive("x_max", x_max)?;
    ensure_positive("y_max", y_max)?;
    ensure_positive("c", c)?;
    check_horizon(horizon)?;
    check_dimension(d)?;
    let first = (y_max / x_max) / sqrt(horizon as f64 * log(2.0 * d as f64));
    Ok(UGrid::dyadic(first, grid_top_index(horizon, c) + 1))
}

/// `⌈log₂ t^{2k}⌉`, zero at `t = 1`.
fn growth_index(t: usize, k: f64) -> usize {
    let p = pow(t as f64, 2.0 * k);
    let v = if p.is_finite() { ceil_log2(p) as f64 } else { ceil(2.0 * k * log2(t as f64)) };
    v.max(0.0) as usize
}

/// `U'_r = t^{-k} 2^r / √(t ln(2d))` for `r = 0..=R'(t)` with
/// `R'(t) = ⌈log₂(2t/c)⌉₊ + ⌈log₂ t^{2k}⌉`.
pub fn build_adaptive_grid(t: usize, k: f64, d: usize, c: f64) -> Result<UGrid> {
    check_horizon(t)?;
    check_dimension(d)?;
    ensure_positive("c", c)?;
    if !(k > 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameter { name: "k", value: k });
    }
    let tf = t as f64;
    let first = pow(tf, -k) / sqrt(tf * log(2.0 * d as f64));
    let top = grid_top_index(t, c) + growth_index(t, k);
    Ok(UGrid::dyadic(first, top + 1))
}

fn wrap(radius: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::Sub { radius, source: Box::new(e) }
}

/// EWA (`η = 1/(8Y²)`, clipping at `Y`) over one sub-forecaster per radius.
#[derive(Debug, Clone)]
pub struct Scaling<F> {
    turn: Turn,
    radii: Vec<f64>,
    subs: Vec<F>,
    ewa: Ewa,
    predictions: Vec<f64>,
}

impl<F: Forecaster> Scaling<F> {
    pub fn new(grid: &UGrid, y_max: f64, mut factory: impl FnMut(f64) -> Result<F>) -> Result<Self> {
        let radii = grid.radii().to_vec();
        let subs = radii
            .iter()
            .map(|&u| factory(u).map_err(wrap(u)))
            .collect::<Result<Vec<F>>>()?;
        let d = subs.first().ok_or(Error::ExpertCount { expected: 1, found: 0 })?.dim();
        if let Some(s) = subs.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
        Ok(Scaling {
            turn: Turn::new(d)?,
            ewa: Ewa::tuned(subs.len(), y_max)?,
            predictions: vec![0.0; subs.len()],
            radii,
            subs,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn ewa(&self) -> &Ewa {
        &self.ewa
    }

    pub fn subs(&self) -> &[F] {
        &self.subs
    }
}

impl<F: Forecaster> Forecaster for Scaling<F> {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        for ((p, s), &u) in self.predictions.iter_mut().zip(&mut self.subs).zip(&self.radii) {
            *p = s.predict(x).map_err(wrap(u))?;
        }
        self.ewa.predict(&self.predictions)
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        self.turn.finish(y)?;
        self.ewa.feed(&self.predictions, y)?;
        for (s, &u) in self.subs.iter_mut().zip(&self.radii) {
            s.feed(y).map_err(wrap(u))?;
        }
        Ok(())
    }
}

/// Starting EWA loss of experts spawned when the grid grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthRule {
    /// Existing losses are kept; newcomers start at the current minimum.
    #[default]
    CarryMinimum,
    /// Every cumulative loss is reset to zero, so weights restart uniform.
    Restart,
}

pub const DEFAULT_GROWTH_EXPONENT: f64 = 2.0;

/// LEG experts on radii `2^j`, `j ∈ [lo(t), hi(t)]`, where the window is
/// ratcheted to cover `[U'_0(t), U'_{R'(t)}(t)]`. Clipping and `η = 1/(8B_t²)`
/// follow the running dyadic threshold `B_t ≥ max_{s<t} |y_s|`.
#[derive(Debug, Clone)]
pub struct FullyAdaptive {
    turn: Turn,
    k: f64,
    c: f64,
    rule: GrowthRule,
    rounds: usize,
    window: (i32, i32),
    exponents: Vec<i32>,
    subs: Vec<Leg>,
    ewa: Ewa,
    threshold: Threshold,
    predictions: Vec<f64>,
}

impl FullyAdaptive {
    pub fn new(d: usize, k: f64, c: f64) -> Result<Self> {
        Self::with_rule(d, k, c, GrowthRule::default())
    }

    pub fn with_rule(d: usize, k: f64, c: f64, rule: GrowthRule) -> Result<Self> {
        let window = Self::window_at(1, k, d, c)?;
        let exponents: Vec<i32> = (window.0..=window.1).collect();
        let subs = exponents
            .iter()
            .map(|&j| Leg::new(pow2(j), d, LossSpec::SQUARE))
            .collect::<Result<Vec<_>>>()?;
        Ok(FullyAdaptive {
            turn: Turn::new(d)?,
            k,
            c,
            rule,
            rounds: 0,
            window,
            ewa: Ewa::new(subs.len(), 1.0, 0.0)?,
            predictions: vec![0.0; subs.len()],
            exponents,
            subs,
            threshold: Threshold::new(LossSpec::SQUARE),
        })
    }

    fn window_at(t: usize, k: f64, d: usize, c: f64) -> Result<(i32, i32)> {
        let grid = build_adaptive_grid(t, k, d, c)?;
        let lo = floor(log2(grid.radii()[0])) as i32;
        let hi = ceil(log2(grid.radii()[grid.top_index()])) as i32;
        Ok((lo, hi))
    }

    /// Current radii, increasing.
    pub fn radii(&self) -> Vec<f64> {
        (self.window.0..=self.window.1).map(pow2).collect()
    }

    pub fn ewa(&self) -> &Ewa {
        &self.ewa
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.value()
    }

    fn spawn(&mut self, j: i32) -> Result<()> {
        let leg = Leg::new(pow2(j), self.dim(), LossSpec::SQUARE)?;
        let initial = match self.rule {
            GrowthRule::CarryMinimum => self.ewa.min_cumulative(),
            GrowthRule::Restart => 0.0,
        };
        self.ewa.insert_expert(initial)?;
        self.exponents.push(j);
        self.subs.push(leg);
        self.predictions.push(0.0);
        Ok(())
    }

    fn grow(&mut self, t: usize) -> Result<()> {
        let (lo, hi) = Self::window_at(t, self.k, self.dim(), self.c)?;
        let (old_lo, old_hi) = self.window;
        if lo >= old_lo && hi <= old_hi {
            return Ok(());
        }
        if self.rule == GrowthRule::Restart {
            self.ewa.reset();
        }
        for j in (lo..old_lo).chain(old_hi + 1..=hi) {
            self.spawn(j)?;
        }
        self.window = (lo.min(old_lo), hi.max(old_hi));
        Ok(())
    }
}

impl Forecaster for FullyAdaptive {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        self.grow(self.rounds + 1)?;
        for ((p, s), &j) in self.predictions.iter_mut().zip(&mut self.subs).zip(&self.exponents) {
            *p = s.predict(x).map_err(wrap(pow2(j)))?;
        }
        let b = self.threshold.value();
        self.ewa.set_clip_bound(b)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        self.ewa.set_eta(1.0 / (8.0 * b * b))?;
        self.ewa.predict(&self.predictions)
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        self.turn.finish(y)?;
        self.ewa.feed(&self.predictions, y)?;
        for (s, &j) in self.subs.iter_mut().zip(&self.exponents) {
            s.feed(y).map_err(wrap(pow2(j)))?;
        }
        self.threshold.observe(y);
        self.rounds += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::SCALING_C;
    use crate::forecaster::NullForecaster;

    #[test]
    fn grid_example() {
        let g = build_grid(1.0, 1.0, 1000, 1, SCALING_C).unwrap();
        assert_eq!(g.len(), 5);
        assert!((g.radii()[0] - 1.0 / sqrt(1000.0 * core::f64::consts::LN_2)).abs() < 1e-15);
        assert!((g.radii()[0] - 0.03799).abs() < 1e-5);
        for w in g.radii().windows(2) {
            assert_eq!(w[1] / w[0], 2.0);
        }
        assert_eq!(build_grid(1.0, 1.0, 50, 3, SCALING_C).unwrap().len(), 1);
    }

    #[test]
    fn adaptive_grid_example() {
        let g = build_adaptive_grid(100, 2.0, 1, SCALING_C).unwrap();
        assert_eq!(g.top_index(), 28);
        assert!(build_adaptive_grid(100, 1.0, 1, SCALING_C).is_err());
    }

    #[test]
    fn single_radius_passes_through() {
        let g = build_grid(1.0, 1.0, 10, 1, SCALING_C).unwrap();
        assert_eq!(g.len(), 1);
        let mut s = Scaling::new(&g, 1.0, |u| Leg::new(u, 1, LossSpec::SQUARE)).unwrap();
        let mut lone = Leg::new(g.radii()[0], 1, LossSpec::SQUARE).unwrap();
        for t in 0..10 {
            let x = [crate::math::sin(t as f64 * 0.7)];
            let y = crate::math::sin(t as f64 * 1.3 + 1.0);
            let a = s.predict(&x).unwrap();
            let b = lone.predict(&x).unwrap();
            assert_eq!(a, crate::loss::clip(b, 1.0));
            s.feed(y).unwrap();
            lone.feed(y).unwrap();
        }
    }

    #[test]
    fn null_subs_predict_zero() {
        let g = build_grid(1.0, 1.0, 1000, 2, SCALING_C).unwrap();
        let mut s = Scaling::new(&g, 1.0, |_| NullForecaster::new(2)).unwrap();
        for _ in 0..5 {
            assert_eq!(s.predict(&[1.0, 1.0]).unwrap(), 0.0);
            s.feed(0.5).unwrap();
        }
    }

    #[test]
    fn sub_errors_carry_radius() {
        let g = build_grid(1.0, 1.0, 10, 1, SCALING_C).unwrap();
        let err = Scaling::new(&g, 1.0, |_| NullForecaster::new(0)).unwrap_err();
        assert!(matches!(err, Error::Sub { .. }));
    }

    #[test]
    fn fully_adaptive_zero_stream() {
        let mut f = FullyAdaptive::new(2, 2.0, SCALING_C).unwrap();
        for t in 0..300 {
            assert_eq!(f.predict(&[t as f64, -1.0]).unwrap(), 0.0);
            f.feed(0.0).unwrap();
        }
    }

    #[test]
    fn fully_adaptive_grid_only_grows() {
        let mut f = FullyAdaptive::new(2, 2.0, SCALING_C).unwrap();
        let mut prev = f.radii();
        for t in 0..500 {
            f.predict(&[0.3, -0.1]).unwrap();
            f.feed(if t % 2 == 0 { 0.4 } else { -0.2 }).unwrap();
            let now = f.radii();
            assert!(prev.iter().all(|u| now.contains(u)));
            prev = now;
        }
        let g = build_adaptive_grid(500, 2.0, 2, SCALING_C).unwrap();
        assert!(prev[0] <= g.radii()[0]);
        assert!(*prev.last().unwrap() >= g.radii()[g.top_index()]);
    }
}
