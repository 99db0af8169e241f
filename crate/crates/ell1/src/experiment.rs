//! One forecaster on one stream, followed by the requested bound checks.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use ell1_core::adaptive_eg::AdaptiveEgSquare;
use ell1_core::bounds::{
    corollary2, corollary3, fully_adaptive_envelope, prop1, remark1, theorem1, theorem3_regret, theorem4, SCALING_C,
    SCALING_C_PRIME,
};
use ell1_core::comparator::{default_tolerance, min_alpha_loss_l1, min_round_losses_l1, min_square_loss_l1, ComparatorResult};
use ell1_core::leg::Leg;
use ell1_core::lipschitz::lipschitzified_losses;
use ell1_core::maurey::MaureyForecaster;
use ell1_core::scaling::{build_grid, FullyAdaptive, Scaling};
use ell1_core::sequences::{generate, StreamConfig, StreamKind};
use ell1_core::{run_forecaster, Forecaster, LossSpec, NullForecaster, RegretTrace, Round, StreamBounds};

use crate::csvio::real;
use crate::error::{HarnessError, Result};

/// Multiplier applied to the fully adaptive envelope, which has no proven constant.
pub const ENVELOPE_MULTIPLIER: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecasterId {
    Null,
    Eg,
    Leg,
    Maurey,
    Scaling,
    Adaptive,
}

impl ForecasterId {
    pub const ALL: [ForecasterId; 6] = [
        ForecasterId::Null,
        ForecasterId::Eg,
        ForecasterId::Leg,
        ForecasterId::Maurey,
        ForecasterId::Scaling,
        ForecasterId::Adaptive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ForecasterId::Null => "null",
            ForecasterId::Eg => "eg",
            ForecasterId::Leg => "leg",
            ForecasterId::Maurey => "maurey",
            ForecasterId::Scaling => "scaling",
            ForecasterId::Adaptive => "adaptive",
        }
    }

    fn default_bounds(self, alpha: f64) -> Vec<BoundKind> {
        match self {
            ForecasterId::Null => vec![],
            ForecasterId::Eg => vec![BoundKind::Prop1, BoundKind::Corollary2],
            ForecasterId::Leg if alpha == 2.0 => vec![BoundKind::Theorem3, BoundKind::Corollary3, BoundKind::Remark1],
            ForecasterId::Leg => vec![BoundKind::Theorem3],
            ForecasterId::Maurey => vec![BoundKind::Theorem1],
            ForecasterId::Scaling => vec![BoundKind::Theorem4],
            ForecasterId::Adaptive => vec![BoundKind::Envelope],
        }
    }
}

fn unknown(what: &str, value: &str, names: impl Iterator<Item = &'static str>) -> HarnessError {
    HarnessError::spec(format!("unknown {what} `{value}` (expected one of: {})", names.collect::<Vec<_>>().join(", ")))
}

impl FromStr for ForecasterId {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| unknown("forecaster", s, Self::ALL.iter().map(|f| f.as_str())))
    }
}

impl fmt::Display for ForecasterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Prop1,
    Corollary2,
    Theorem1,
    Theorem3,
    Corollary3,
    Remark1,
    Theorem4,
    Envelope,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::Prop1,
        BoundKind::Corollary2,
        BoundKind::Theorem1,
        BoundKind::Theorem3,
        BoundKind::Corollary3,
        BoundKind::Remark1,
        BoundKind::Theorem4,
        BoundKind::Envelope,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Prop1 => "prop1",
            BoundKind::Corollary2 => "corollary2",
            BoundKind::Theorem1 => "theorem1",
            BoundKind::Theorem3 => "theorem3",
            BoundKind::Corollary3 => "corollary3",
            BoundKind::Remark1 => "remark1",
            BoundKind::Theorem4 => "theorem4",
            BoundKind::Envelope => "envelope",
        }
    }

    /// Whether a failure of this bound for `forecaster` is a violation of a
    /// proven guarantee rather than an informational comparison.
    pub fn is_hard_for(self, forecaster: ForecasterId, fixed_eta: bool, alpha: f64) -> bool {
        match self {
            BoundKind::Prop1 | BoundKind::Corollary2 => forecaster == ForecasterId::Eg && !fixed_eta,
            BoundKind::Theorem3 => forecaster == ForecasterId::Leg,
            BoundKind::Corollary3 | BoundKind::Remark1 => forecaster == ForecasterId::Leg && alpha == 2.0,
            BoundKind::Theorem1 => forecaster == ForecasterId::Maurey,
            BoundKind::Theorem4 => forecaster == ForecasterId::Scaling,
            BoundKind::Envelope => false,
        }
    }

    /// Measured against the Lipschitzified comparator rather than the plain one.
    fn uses_lipschitzified(self) -> bool {
        matches!(self, BoundKind::Theorem3 | BoundKind::Corollary3)
    }
}

impl FromStr for BoundKind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| unknown("bound", s, Self::ALL.iter().map(|b| b.as_str())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecasterSpec {
    pub id: ForecasterId,
    /// ℓ¹ radius `U` of the forecaster and of the comparator ball.
    pub radius: f64,
    /// Fixed learning rate for EG±; `None` selects self-confident tuning.
    pub eta: Option<f64>,
    /// Growth exponent of the fully adaptive grid.
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StreamSpec {
    Generated { config: StreamConfig, kind: StreamKind },
    File(PathBuf),
}

impl StreamSpec {
    pub fn load(&self) -> Result<Vec<Round>> {
        match self {
            StreamSpec::Generated { config, kind } => Ok(generate(config, kind)?),
            StreamSpec::File(path) => crate::csvio::read_stream_file(path),
        }
    }

    fn describe(&self) -> String {
        match self {
            StreamSpec::Generated { config, kind } => {
                let name = match kind {
                    StreamKind::Uniform => "uniform",
                    StreamKind::Zero => "zero",
                    StreamKind::SparseLinear { .. } => "sparse",
                    StreamKind::Sinusoidal { .. } => "sinusoidal",
                };
                format!("{name} seed={}", config.seed)
            }
            StreamSpec::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub forecaster: ForecasterSpec,
    pub stream: StreamSpec,
    /// Exponent of the α-loss; values other than 2 require LEG or null.
    pub alpha: f64,
    /// Empty selects the forecaster's default checks.
    pub bounds: Vec<BoundKind>,
    /// Comparator duality-gap tolerance; `None` uses the default.
    pub tolerance: Option<f64>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        LossSpec::new(self.alpha)?;
        let f = &self.forecaster;
        if !(f.radius > 0.0 && f.radius.is_finite()) {
            return Err(HarnessError::spec(format!("radius must be positive, got {}", f.radius)));
        }
        if self.alpha != 2.0 && !matches!(f.id, ForecasterId::Leg | ForecasterId::Null) {
            return Err(HarnessError::spec(format!("forecaster `{}` supports only alpha = 2", f.id)));
        }
        if f.eta.is_some() && f.id != ForecasterId::Eg {
            return Err(HarnessError::spec("eta applies only to the eg forecaster"));
        }
        if let Some(tol) = self.tolerance {
            if tol.is_nan() || tol <= 0.0 {
                return Err(HarnessError::spec(format!("tolerance must be positive, got {tol}")));
            }
        }
        if self.bounds.contains(&BoundKind::Prop1) && f.id != ForecasterId::Eg {
            return Err(HarnessError::spec("prop1 needs the gradient statistics of the eg forecaster"));
        }
        Ok(())
    }

    pub fn bound_list(&self) -> Vec<BoundKind> {
        if self.bounds.is_empty() {
            self.forecaster.id.default_bounds(self.alpha)
        } else {
            self.bounds.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundOutcome {
    pub kind: BoundKind,
    /// Certified lower bound on the comparator loss the regret is taken against.
    pub comparator: f64,
    pub regret: f64,
    pub bound: f64,
    pub hard: bool,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub forecaster: ForecasterId,
    pub stream: String,
    pub dim: usize,
    pub stats: StreamBounds,
    pub alpha: f64,
    pub radius: f64,
    pub trace: RegretTrace,
    pub comparator: ComparatorResult,
    pub lip_comparator: Option<ComparatorResult>,
    pub bounds: Vec<BoundOutcome>,
}

impl RunReport {
    /// Regret against the certified lower bound of the plain comparator.
    pub fn regret(&self) -> f64 {
        self.trace.total_loss() - self.comparator.lower_bound()
    }

    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.pass || !b.hard)
    }

    pub fn write_summary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "forecaster: {}", self.forecaster)?;
        writeln!(w, "stream: {}", self.stream)?;
        writeln!(w, "dim: {}", self.dim)?;
        writeln!(w, "horizon: {}", self.stats.horizon)?;
        writeln!(w, "x_max: {}", real(self.stats.x_max))?;
        writeln!(w, "y_max: {}", real(self.stats.y_max))?;
        writeln!(w, "alpha: {}", self.alpha)?;
        writeln!(w, "radius: {}", self.radius)?;
        writeln!(w, "total_loss: {}", real(self.trace.total_loss()))?;
        writeln!(w, "comparator_loss: {}", real(self.comparator.loss))?;
        writeln!(w, "comparator_gap: {}", real(self.comparator.gap))?;
        writeln!(w, "comparator_iterations: {}", self.comparator.iterations)?;
        if let Some(lip) = &self.lip_comparator {
            writeln!(w, "lip_comparator_loss: {}", real(lip.loss))?;
            writeln!(w, "lip_comparator_gap: {}", real(lip.gap))?;
        }
        writeln!(w, "regret: {}", real(self.regret()))?;
        for b in &self.bounds {
            writeln!(
                w,
                "bound {}: {} regret={} bound={} comparator={}{}",
                b.kind.as_str(),
                if b.pass { "PASS" } else { "FAIL" },
                real(b.regret),
                real(b.bound),
                real(b.comparator),
                if b.hard { "" } else { " (informational)" },
            )?;
        }
        writeln!(w, "verdict: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

enum Built {
    Null(NullForecaster),
    Eg(AdaptiveEgSquare),
    Leg(Leg),
    Maurey(MaureyForecaster),
    Scaling(Scaling<Leg>),
    Adaptive(FullyAdaptive),
}

impl Built {
    fn as_dyn(&mut self) -> &mut dyn Forecaster {
        match self {
            Built::Null(f) => f,
            Built::Eg(f) => f,
            Built::Leg(f) => f,
            Built::Maurey(f) => f,
            Built::Scaling(f) => f,
            Built::Adaptive(f) => f,
        }
    }
}

fn build(spec: &ExperimentSpec, d: usize, stats: &StreamBounds) -> Result<Built> {
    let f = &spec.forecaster;
    let u = f.radius;
    Ok(match f.id {
        ForecasterId::Null => Built::Null(NullForecaster::new(d)?),
        ForecasterId::Eg => Built::Eg(match f.eta {
            Some(eta) => AdaptiveEgSquare::with_fixed_eta(u, d, eta)?,
            None => AdaptiveEgSquare::new(u, d)?,
        }),
        ForecasterId::Leg => Built::Leg(Leg::new(u, d, LossSpec::new(spec.alpha)?)?),
        ForecasterId::Maurey => Built::Maurey(MaureyForecaster::new(u, stats.x_max, stats.y_max, stats.horizon, d)?),
        ForecasterId::Scaling => {
            let grid = build_grid(stats.x_max, stats.y_max, stats.horizon, d, SCALING_C)?;
            Built::Scaling(Scaling::new(&grid, stats.y_max, |r| Leg::new(r, d, LossSpec::SQUARE))?)
        }
        ForecasterId::Adaptive => Built::Adaptive(FullyAdaptive::new(d, f.k, SCALING_C)?),
    })
}

/// Runs the experiment on an already loaded stream. `X`, `Y` and `T` given
/// to forecasters and bounds are the realized values of the stream.
pub fn run_on(spec: &ExperimentSpec, rounds: &[Round], stream_label: String) -> Result<RunReport> {
    spec.validate()?;
    let stats = StreamBounds::from_rounds(rounds)?;
    let d = rounds[0].dim();
    let loss = LossSpec::new(spec.alpha)?;
    let u = spec.forecaster.radius;
    let tol = spec.tolerance.unwrap_or_else(|| default_tolerance(rounds));

    let mut built = build(spec, d, &stats)?;
    let mut trace = run_forecaster(built.as_dyn(), rounds, loss)?;

    let comparator = if loss.is_square() {
        min_square_loss_l1(rounds, u, tol)?
    } else {
        min_alpha_loss_l1(rounds, u, loss, tol)?
    };
    let kinds = spec.bound_list();
    let lip_comparator = if kinds.iter().any(|k| k.uses_lipschitzified()) {
        let losses = lipschitzified_losses(rounds, loss)?;
        Some(min_round_losses_l1(&losses, u, tol)?)
    } else {
        None
    };

    let (x, y, t) = (stats.x_max, stats.y_max, stats.horizon);
    let total = trace.total_loss();
    let plain = comparator.lower_bound();
    let fixed_eta = spec.forecaster.eta.is_some();
    let mut bounds = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let lip = lip_comparator.as_ref().map_or(plain, |c| c.lower_bound());
        let (comp, value) = match kind {
            BoundKind::Prop1 => {
                let Built::Eg(eg) = &built else { unreachable!("validated") };
                let s = eg.state();
                (plain, prop1(u, s.grad_sq_sum(), s.grad_max(), d))
            }
            BoundKind::Corollary2 => (plain, corollary2(u, x, y, t, d, Some(plain))),
            BoundKind::Theorem1 => (plain, theorem1(u, x, y, t, d)),
            BoundKind::Theorem3 => (lip, theorem3_regret(u, x, y, spec.alpha, d, lip)),
            BoundKind::Corollary3 => (lip, corollary3(u, x, y, d, lip)),
            BoundKind::Remark1 => (plain, remark1(u, x, y, t, d)),
            BoundKind::Theorem4 => (plain, theorem4(u, x, y, t, d, SCALING_C, SCALING_C_PRIME)),
            BoundKind::Envelope => {
                (plain, fully_adaptive_envelope(ENVELOPE_MULTIPLIER, u, x, y, t, d, spec.forecaster.k))
            }
        };
        let regret = total - comp;
        bounds.push(BoundOutcome {
            kind,
            comparator: comp,
            regret,
            bound: value,
            hard: kind.is_hard_for(spec.forecaster.id, fixed_eta, spec.alpha),
            pass: regret <= value,
        });
    }

    match bounds.first() {
        Some(b) => {
            trace.set_comparator_loss(b.comparator);
            trace.set_bound(b.bound);
        }
        None => trace.set_comparator_loss(plain),
    }
    Ok(RunReport {
        forecaster: spec.forecaster.id,
        stream: stream_label,
        dim: d,
        stats,
        alpha: spec.alpha,
        radius: u,
        trace,
        comparator,
        lip_comparator,
        bounds,
    })
}

pub fn run(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let rounds = spec.stream.load()?;
    run_on(spec, &rounds, spec.stream.describe())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(id: ForecasterId, kind: StreamKind, d: usize, t: usize, alpha: f64) -> ExperimentSpec {
        ExperimentSpec {
            forecaster: ForecasterSpec { id, radius: 1.0, eta: None, k: 2.0 },
            stream: StreamSpec::Generated {
                config: StreamConfig { dim: d, horizon: t, x_max: 1.0, y_max: 1.0, seed: 3 },
                kind,
            },
            alpha,
            bounds: vec![],
            tolerance: None,
        }
    }

    #[test]
    fn null_on_zero_stream_has_zero_regret() {
        let mut s = spec(ForecasterId::Null, StreamKind::Zero, 3, 20, 2.0);
        s.bounds = vec![BoundKind::Corollary2, BoundKind::Remark1];
        let r = run(&s).unwrap();
        assert_eq!(r.regret(), 0.0);
        assert!(r.bounds.iter().all(|b| b.pass));
    }

    #[test]
    fn eg_passes_corollary2() {
        let r = run(&spec(ForecasterId::Eg, StreamKind::Uniform, 5, 200, 2.0)).unwrap();
        assert!(r.passed());
        assert!(r.bounds.iter().any(|b| b.kind == BoundKind::Corollary2 && b.pass && b.hard));
    }

    #[test]
    fn leg_alpha_three_passes_theorem3() {
        let r = run(&spec(ForecasterId::Leg, StreamKind::Uniform, 3, 100, 3.0)).unwrap();
        assert_eq!(r.bounds.len(), 1);
        assert!(r.bounds[0].pass && r.bounds[0].hard);
        assert!(r.lip_comparator.is_some());
    }

    #[test]
    fn maurey_out_of_regime_is_a_spec_error() {
        let mut s = spec(ForecasterId::Maurey, StreamKind::Uniform, 2, 50, 2.0);
        s.forecaster.radius = 5.0;
        assert_eq!(run(&s).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn only_hard_failures_fail_the_run() {
        let mut r = run(&spec(ForecasterId::Eg, StreamKind::Uniform, 2, 30, 2.0)).unwrap();
        r.bounds[0].pass = false;
        r.bounds[0].hard = false;
        assert!(r.passed());
        r.bounds[0].hard = true;
        assert!(!r.passed());
        let mut out = Vec::new();
        r.write_summary(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().ends_with("verdict: FAIL\n"));
    }

    #[test]
    fn alpha_restricted_to_leg() {
        let s = spec(ForecasterId::Eg, StreamKind::Uniform, 2, 10, 3.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn names_round_trip() {
        for f in ForecasterId::ALL {
            assert_eq!(f.as_str().parse::<ForecasterId>().unwrap(), f);
        }
        for b in BoundKind::ALL {
            assert_eq!(b.as_str().parse::<BoundKind>().unwrap(), b);
        }
        assert!("nope".parse::<BoundKind>().unwrap_err().to_string().contains("theorem4"));
    }
}
