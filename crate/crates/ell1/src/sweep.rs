//! Sweep of the intrinsic quantity `κ = √T U X / (2dY)` across the regime
//! transition, emitting realized regret next to the `κ`-form bound.

use std::io::Write;

use rayon::prelude::*;

use ell1_core::bounds::{classify_kappa, corollary1, RegimeLabel};
use ell1_core::comparator::{default_tolerance, min_square_loss_l1};
use ell1_core::leg::Leg;
use ell1_core::maurey::MaureyForecaster;
use ell1_core::sequences::{gen_uniform_bounded, CounterRng, StreamConfig};
use ell1_core::{run_forecaster, Forecaster, LossSpec};

use crate::csvio::real;
use crate::error::{HarnessError, Result};
use crate::experiment::ForecasterId;

pub const SWEEP_HEADER: [&str; 9] =
    ["kappa", "T", "U", "regime", "forecaster", "trials", "mean_regret", "max_regret", "bound"];

/// Smallest horizon used by the sweep.
pub const MIN_HORIZON: usize = 16;

/// Largest Maurey grid the sweep will enumerate before falling back to LEG.
pub const SWEEP_GRID_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub y_max: f64,
    pub kappas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Worker count; `None` reads `ELL1_THREADS`, then machine parallelism.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub horizon: usize,
    pub radius: f64,
    pub regime: RegimeLabel,
    pub forecaster: ForecasterId,
    pub trials: usize,
    pub mean_regret: f64,
    pub max_regret: f64,
    pub bound: f64,
}

/// `(T, U)` with `X = 1`: `T = max(⌈(2dκY)²⌉, 16)` and `U` solving `κ` exactly.
pub fn sweep_point(d: usize, y_max: f64, kappa: f64) -> (usize, f64) {
    let scale = 2.0 * d as f64 * kappa * y_max;
    let horizon = ((scale * scale).ceil() as usize).max(MIN_HORIZON);
    (horizon, scale / (horizon as f64).sqrt())
}

pub fn threads_from_env() -> Option<usize> {
    std::env::var("ELL1_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

fn forecaster_for(regime: RegimeLabel, u: f64, y: f64, t: usize, d: usize) -> Result<(ForecasterId, Box<dyn Forecaster>)> {
    if regime == RegimeLabel::Mid {
        match MaureyForecaster::with_cap(u, 1.0, y, t, d, SWEEP_GRID_CAP) {
            Ok(f) => return Ok((ForecasterId::Maurey, Box::new(f))),
            Err(ell1_core::Error::GridTooLarge { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok((ForecasterId::Leg, Box::new(Leg::new(u, d, LossSpec::SQUARE)?)))
}

fn trial(cfg: &SweepConfig, index: usize, kappa: f64, trial: usize) -> Result<(ForecasterId, f64)> {
    let (t, u) = sweep_point(cfg.dim, cfg.y_max, kappa);
    let regime = classify_kappa(kappa, cfg.dim).label;
    let seed = CounterRng::new(cfg.seed).fork(index as u64).bits(trial as u64);
    let stream = StreamConfig { dim: cfg.dim, horizon: t, x_max: 1.0, y_max: cfg.y_max, seed };
    let rounds = gen_uniform_bounded(&stream)?;
    let (id, mut f) = forecaster_for(regime, u, cfg.y_max, t, cfg.dim)?;
    let trace = run_forecaster(&mut f, &rounds, LossSpec::SQUARE)?;
    let comp = min_square_loss_l1(&rounds, u, default_tolerance(&rounds))?;
    Ok((id, trace.total_loss() - comp.lower_bound()))
}

pub fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.dim == 0 {
        return Err(HarnessError::spec("dim must be at least 1"));
    }
    if !(cfg.y_max > 0.0 && cfg.y_max.is_finite()) {
        return Err(HarnessError::spec(format!("y-max must be positive, got {}", cfg.y_max)));
    }
    if cfg.trials == 0 {
        return Err(HarnessError::spec("trials must be at least 1"));
    }
    if cfg.kappas.is_empty() {
        return Err(HarnessError::spec("at least one kappa is required"));
    }
    if let Some(k) = cfg.kappas.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
        return Err(HarnessError::spec(format!("kappa values must be positive, got {k}")));
    }
    Ok(())
}

/// Rows in the order of `cfg.kappas`; output does not depend on the thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    validate(cfg)?;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.kappas.len()).flat_map(|i| (0..cfg.trials).map(move |j| (i, j))).collect();
    let threads = cfg.threads.or_else(threads_from_env).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::spec(format!("thread pool: {e}")))?;
    let results: Vec<Result<(ForecasterId, f64)>> =
        pool.install(|| jobs.par_iter().map(|&(i, j)| trial(cfg, i, cfg.kappas[i], j)).collect());

    let mut rows = Vec::with_capacity(cfg.kappas.len());
    let mut it = results.into_iter();
    for &kappa in &cfg.kappas {
        let (t, u) = sweep_point(cfg.dim, cfg.y_max, kappa);
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        let mut id = ForecasterId::Leg;
        for r in it.by_ref().take(cfg.trials) {
            let (f, regret) = r?;
            id = f;
            sum += regret;
            max = max.max(regret);
        }
        rows.push(SweepRow {
            kappa,
            horizon: t,
            radius: u,
            regime: classify_kappa(kappa, cfg.dim).label,
            forecaster: id,
            trials: cfg.trials,
            mean_regret: sum / cfg.trials as f64,
            max_regret: max,
            bound: corollary1(kappa, cfg.dim, cfg.y_max),
        });
    }
    Ok(rows)
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            real(r.kappa),
            r.horizon.to_string(),
            real(r.radius),
            r.regime.as_str().to_string(),
            r.forecaster.as_str().to_string(),
            r.trials.to_string(),
            real(r.mean_regret),
            real(r.max_regret),
            real(r.bound),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io("<sweep>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ell1_core::bounds::kappa as kappa_of;

    #[test]
    fn sweep_point_hits_kappa() {
        for d in [1, 3] {
            for k in [0.1, 0.25, 1.0, 2.0, 4.0, 10.0] {
                let (t, u) = sweep_point(d, 1.0, k);
                assert!(t >= MIN_HORIZON);
                let got = kappa_of(u, 1.0, 1.0, t, d).kappa;
                assert!((got - k).abs() <= 1e-12 * k, "{got} vs {k}");
            }
        }
    }

    fn cfg(threads: usize) -> SweepConfig {
        SweepConfig { dim: 1, y_max: 1.0, kappas: vec![0.25, 1.0, 2.0], trials: 3, seed: 9, threads: Some(threads) }
    }

    #[test]
    fn independent_of_thread_count() {
        let a = run_sweep(&cfg(1)).unwrap();
        let b = run_sweep(&cfg(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn maurey_rows_respect_the_bound() {
        let rows = run_sweep(&cfg(2)).unwrap();
        let mid = rows.iter().find(|r| r.kappa == 1.0).unwrap();
        assert_eq!(mid.forecaster, ForecasterId::Maurey);
        assert!(mid.max_regret <= mid.bound);
        assert_eq!(rows[2].regime, RegimeLabel::High);
    }

    #[test]
    fn rejects_nonpositive_kappa() {
        let mut c = cfg(1);
        c.kappas.push(0.0);
        assert_eq!(run_sweep(&c).unwrap_err().exit_code(), 2);
    }
}
