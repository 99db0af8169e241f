//! Clipped EWA over the discretized ball
//! `B̃_{U,m} = {(k_1 U/m, …, k_d U/m) : k ∈ ℤ^d, Σ|k_j| ≤ m}`.
//!
//! Every point of `B₁(U)` is within `TU²X²/m` (in cumulative square loss) of
//! some grid point, and the grid has at most `(e(2d+m)/m)^m` points, so
//! aggregating it with exp-concave EWA attains the minimax rate in the
//! middle regime. Cost is `O(|grid| · d)` per round.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_positive, Error, Result};
use crate::ewa::Ewa;
use crate::forecaster::{Forecaster, Turn};
use crate::math::{dot, floor, log, pow, sqrt};

pub const DEFAULT_GRID_CAP: usize = 2_000_000;

const LN_2: f64 = core::f64::consts::LN_2;
const E: f64 = core::f64::consts::E;

/// The interval `[lo, hi]` of radii forming the middle regime:
/// `lo = (Y/X)√(ln(1+2d)/(T ln 2))`, `hi = 2dY/(√T X)`.
pub fn middle_regime(x_max: f64, y_max: f64, horizon: usize, d: usize) -> (f64, f64) {
    let t = horizon as f64;
    let lo = (y_max / x_max) * sqrt(log(1.0 + 2.0 * d as f64) / (t * LN_2));
    let hi = 2.0 * d as f64 * y_max / (sqrt(t) * x_max);
    (lo, hi)
}

fn check_inputs(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> Result<()> {
    ensure_positive("radius", radius)?;
    ensure_positive("x_max", x_max)?;
    ensure_positive("y_max", y_max)?;
    if horizon == 0 {
        return Err(Error::InvalidParameter { name: "horizon", value: 0.0 });
    }
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    Ok(())
}

/// `⌊(UX/Y)√(T ln 2 / ln(1 + 2dY/(√T UX)))⌋` for middle-regime inputs.
pub fn select_m(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> Result<usize> {
    check_inputs(radius, x_max, y_max, horizon, d)?;
    let (lo, hi) = middle_regime(x_max, y_max, horizon, d);
    let slack = 1e-12;
    if radius < lo * (1.0 - slack) {
        return Err(Error::Regime { inequality: "(Y/X)sqrt(ln(1+2d)/(T ln 2)) <= U", lhs: lo, rhs: radius });
    }
    if radius > hi * (1.0 + slack) {
        return Err(Error::Regime { inequality: "U <= 2dY/(sqrt(T) X)", lhs: radius, rhs: hi });
    }
    let t = horizon as f64;
    let ux = radius * x_max;
    let ratio = 2.0 * d as f64 * y_max / (sqrt(t) * ux);
    let a = (ux / y_max) * sqrt(t * LN_2 / log(1.0 + ratio));
    Ok((floor(a) as usize).max(1))
}

/// Exact `|B̃_{U,m}| = Σ_i 2^i C(d,i) C(m,i)`, as a float.
pub fn grid_cardinality(d: usize, m: usize) -> f64 {
    let mut total = 0.0;
    let mut cd = 1.0;
    let mut cm = 1.0;
    let mut two = 1.0;
    for i in 0..=d.min(m) {
        if i > 0 {
            cd = cd * (d - i + 1) as f64 / i as f64;
            cm = cm * (m - i + 1) as f64 / i as f64;
            two *= 2.0;
        }
        total += two * cd * cm;
    }
    total
}

/// `(e(2d+m)/m)^m`.
pub fn cardinality_bound(d: usize, m: usize) -> f64 {
    let mf = m as f64;
    pow(E * (2.0 * d as f64 + mf) / mf, mf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaureyGrid {
    radius: f64,
    m: usize,
    d: usize,
    points: Vec<f64>,
}

impl MaureyGrid {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }
}

pub fn enumerate_grid(d: usize, m: usize, radius: f64) -> Result<MaureyGrid> {
    enumerate_grid_capped(d, m, radius, DEFAULT_GRID_CAP)
}

/// All points of `B̃_{U,m}`, lexicographic in `(k_1, …, k_d)`.
pub fn enumerate_grid_capped(d: usize, m: usize, radius: f64, cap: usize) -> Result<MaureyGrid> {
    if d == 0 {
        return Err(Error::EmptyDimension);
    }
    if m == 0 {
        return Err(Error::InvalidParameter { name: "m", value: 0.0 });
    }
    ensure_positive("radius", radius)?;
    let cardinality = grid_cardinality(d, m);
    if cardinality > cap as f64 {
        return Err(Error::GridTooLarge { cardinality, bound: cardinality_bound(d, m), cap });
    }
    let step = radius / m as f64;
    let mut points = Vec::with_capacity(cardinality as usize * d);
    let mut k = vec![0i64; d];
    fill(&mut k, 0, m as i64, step, &mut points);
    Ok(MaureyGrid { radius, m, d, points })
}

fn fill(k: &mut [i64], j: usize, budget: i64, step: f64, out: &mut Vec<f64>) {
    if j == k.len() {
        out.extend(k.iter().map(|&kj| kj as f64 * step));
        return;
    }
    for v in -budget..=budget {
        k[j] = v;
        fill(k, j + 1, budget - v.abs(), step, out);
    }
}

/// Clipped EWA (`η = 1/(8Y²)`) over the grid experts `u ↦ u·x_t`.
#[derive(Debug, Clone)]
pub struct MaureyForecaster {
    turn: Turn,
    grid: MaureyGrid,
    ewa: Ewa,
    predictions: Vec<f64>,
}

impl MaureyForecaster {
    pub fn new(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> Result<Self> {
        Self::with_cap(radius, x_max, y_max, horizon, d, DEFAULT_GRID_CAP)
    }

    pub fn with_cap(
        radius: f64,
        x_max: f64,
        y_max: f64,
        horizon: usize,
        d: usize,
        cap: usize,
    ) -> Result<Self> {
        let m = select_m(radius, x_max, y_max, horizon, d)?;
        let grid = enumerate_grid_capped(d, m, radius, cap)?;
        Self::from_grid(grid, y_max)
    }

    /// EWA over an explicit grid, tuned for observations bounded by `y_max`.
    pub fn from_grid(grid: MaureyGrid, y_max: f64) -> Result<Self> {
        let ewa = Ewa::tuned(grid.len(), y_max)?;
        Ok(MaureyForecaster {
            turn: Turn::new(grid.dim())?,
            predictions: vec![0.0; grid.len()],
            grid,
            ewa,
        })
    }

    pub fn grid(&self) -> &MaureyGrid {
        &self.grid
    }

    pub fn ewa(&self) -> &Ewa {
        &self.ewa
    }
}

impl Forecaster for MaureyForecaster {
    fn dim(&self) -> usize {
        self.turn.dim()
    }

    fn predict(&mut self, x: &[f64]) -> Result<f64> {
        self.turn.begin(x)?;
        for (p, u) in self.predictions.iter_mut().zip(self.grid.iter()) {
            *p = dot(u, x);
        }
        self.ewa.predict(&self.predictions)
    }

    fn feed(&mut self, y: f64) -> Result<()> {
        self.turn.finish(y)?;
        self.ewa.feed(&self.predictions, y)
    }
}
