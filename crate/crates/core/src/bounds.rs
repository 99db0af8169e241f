//! Closed-form regret guarantees.
//!
//! Every function returns the right-hand side of a deterministic regret
//! inequality, so a run passes when `regret ≤ bound` (with the comparator's
//! certified lower bound in place of the exact minimum).

use crate::math::{ceil_log2_plus, log, pow, sqrt};

const LN_2: f64 = core::f64::consts::LN_2;

/// `8(√2 + 1)`.
pub const LEG_C1: f64 = 19.313_708_498_984_76;
/// `4(1 + 1/√2)²`.
pub const LEG_C2: f64 = 11.656_854_249_492_38;
/// `9 · LEG_C1 = 72(√2 + 1)`.
pub const SCALING_C: f64 = 173.823_376_490_862_84;
/// Additive constant paired with [`SCALING_C`].
pub const SCALING_C_PRIME: f64 = LEG_C2;

/// Relative distance to a case threshold within which both adjacent
/// formulas are evaluated and the smaller one reported.
const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// `κ` below `√ln(1+2d) / (2d√ln 2)`.
    BelowGrid,
    /// Between that threshold and `1`, both included.
    Mid,
    /// `κ > 1`.
    High,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::BelowGrid => "below-grid",
            RegimeLabel::Mid => "mid",
            RegimeLabel::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub kappa: f64,
    pub label: RegimeLabel,
}

/// Lower `κ` threshold `√ln(1+2d) / (2d √ln 2)`.
pub fn kappa_low_threshold(d: usize) -> f64 {
    let d = d as f64;
    sqrt(log(1.0 + 2.0 * d)) / (2.0 * d * sqrt(LN_2))
}

pub fn classify_kappa(kappa: f64, d: usize) -> Regime {
    let label = if kappa < kappa_low_threshold(d) {
        RegimeLabel::BelowGrid
    } else if kappa <= 1.0 {
        RegimeLabel::Mid
    } else {
        RegimeLabel::High
    };
    Regime { kappa, label }
}

/// `κ = √T U X / (2dY)` and its regime.
pub fn kappa(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> Regime {
    let k = sqrt(horizon as f64) * radius * x_max / (2.0 * d as f64 * y_max);
    classify_kappa(k, d)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * b.abs()
}

/// Minimax upper bound on the regret over `B₁(U)`, case-selected by `U`.
pub fn theorem1(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> f64 {
    let (u, x, y, t, df) = (radius, x_max, y_max, horizon as f64, d as f64);
    let low = || 3.0 * u * x * y * sqrt(2.0 * t * log(2.0 * df));
    let mid = || 26.0 * u * x * y * sqrt(t * log(1.0 + 2.0 * df * y / (sqrt(t) * u * x)));
    let high = || 32.0 * df * y * y * log(1.0 + sqrt(t) * u * x / (df * y)) + df * y * y;
    let lo = (y / x) * sqrt(log(1.0 + 2.0 * df) / (t * LN_2));
    let hi = 2.0 * df * y / (sqrt(t) * x);
    if near(u, lo) {
        low().min(mid())
    } else if near(u, hi) {
        mid().min(high())
    } else if u < lo {
        low()
    } else if u <= hi {
        mid()
    } else {
        high()
    }
}

/// The same bound written through `κ`; it coincides with [`theorem1`] in
/// the two lower cases and dominates it in the high case.
pub fn corollary1(kappa: f64, d: usize, y_max: f64) -> f64 {
    let (df, y2) = (d as f64, y_max * y_max);
    let low = || 6.0 * df * y2 * kappa * sqrt(2.0 * log(2.0 * df));
    let mid = || 52.0 * df * y2 * kappa * sqrt(log(1.0 + 1.0 / kappa));
    let high = || 32.0 * df * y2 * (log(1.0 + 2.0 * kappa) + 1.0);
    let lo = kappa_low_threshold(d);
    if near(kappa, lo) {
        low().min(mid())
    } else if near(kappa, 1.0) {
        mid().min(high())
    } else {
        match classify_kappa(kappa, d).label {
            RegimeLabel::BelowGrid => low(),
            RegimeLabel::Mid => mid(),
            RegimeLabel::High => high(),
        }
    }
}

/// Adaptive EG± on convex losses:
/// `4U√(Σ‖g_t‖∞² ln 2d) + U(8 ln 2d + 12) max_t ‖g_t‖∞`.
pub fn prop1(radius: f64, grad_sq_sum: f64, grad_max: f64, d: usize) -> f64 {
    let l = log(2.0 * d as f64);
    4.0 * radius * sqrt(grad_sq_sum * l) + radius * (8.0 * l + 12.0) * grad_max
}

/// Adaptive EG± on square losses. With `Some(L*)` the small-loss form
/// `8UX√(L* ln 2d) + (137 ln 2d + 24)(UXY + U²X²)`, otherwise `L* ≤ TY²`.
pub fn corollary2(
    radius: f64,
    x_max: f64,
    y_max: f64,
    horizon: usize,
    d: usize,
    comparator_loss: Option<f64>,
) -> f64 {
    let l = log(2.0 * d as f64);
    let ux = radius * x_max;
    let loss = comparator_loss.unwrap_or(horizon as f64 * y_max * y_max);
    8.0 * ux * sqrt(loss * l) + (137.0 * l + 24.0) * (ux * y_max + ux * ux)
}

/// The constants `(a, b, a', a'', a''')` of the LEG bound for exponent `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaConstants {
    pub a: f64,
    pub b: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn constants_alpha(alpha: f64) -> AlphaConstants {
    let s = 1.0 + pow(2.0, 1.0 / alpha);
    let a = 4.0 * alpha * pow(s, alpha / 2.0 - 1.0);
    let b = alpha * pow(s, alpha - 1.0);
    let root = sqrt(b * (4.0 + 6.0 / LN_2));
    let inv = 1.0 + pow(2.0, -1.0 / alpha);
    AlphaConstants {
        a,
        b,
        a1: a * (root + 2.0 * pow(inv, alpha / 2.0) / sqrt(LN_2)) + 8.0 * b,
        a2: a * (root + a),
        a3: 4.0 * pow(inv, alpha),
    }
}

/// LEG under the α-loss, against the Lipschitzified comparator loss `L̃`.
pub fn theorem3(radius: f64, x_max: f64, y_max: f64, alpha: f64, d: usize, lip_comparator_loss: f64) -> f64 {
    let k = constants_alpha(alpha);
    let l = log(2.0 * d as f64);
    let ux = radius * x_max;
    let lc = lip_comparator_loss.max(0.0);
    lc + k.a * ux * pow(y_max, alpha / 2.0 - 1.0) * sqrt(lc * l)
        + (k.a1 * l + 12.0 * k.b) * ux * pow(y_max, alpha - 1.0)
        + k.a2 * l * ux * ux * pow(y_max, alpha - 2.0)
        + k.a3 * pow(y_max, alpha)
}

/// [`theorem3`] minus its leading `L̃` term, i.e. a regret bound.
pub fn theorem3_regret(radius: f64, x_max: f64, y_max: f64, alpha: f64, d: usize, lip_comparator_loss: f64) -> f64 {
    theorem3(radius, x_max, y_max, alpha, d, lip_comparator_loss) - lip_comparator_loss.max(0.0)
}

/// Square-loss LEG regret with the rounded constants
/// `8UX√(L̃ ln 2d) + (134 ln 2d + 58)(UXY + U²X²) + 12Y²`.
pub fn corollary3(radius: f64, x_max: f64, y_max: f64, d: usize, lip_comparator_loss: f64) -> f64 {
    let l = log(2.0 * d as f64);
    let ux = radius * x_max;
    8.0 * ux * sqrt(lip_comparator_loss.max(0.0) * l)
        + (134.0 * l + 58.0) * (ux * y_max + ux * ux)
        + 12.0 * y_max * y_max
}

/// Scaling over sub-forecasters with regret `cUXY√(T ln 2d) + c'Y²`:
/// `2cUXY√(T ln 2d) + 8Y² ln(⌈log₂(2T/c)⌉₊ + 1) + (c + c')Y²`.
pub fn theorem4(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize, c: f64, c_prime: f64) -> f64 {
    let t = horizon as f64;
    let y2 = y_max * y_max;
    let r = ceil_log2_plus(2.0 * t / c) as f64;
    2.0 * c * radius * x_max * y_max * sqrt(t * log(2.0 * d as f64)) + 8.0 * y2 * log(r + 1.0) + (c + c_prime) * y2
}

/// Square-loss LEG regret without the small-loss refinement:
/// `c₁UXY(√(T ln 2d) + 8 ln 2d) + c₂Y²`.
pub fn remark1(radius: f64, x_max: f64, y_max: f64, horizon: usize, d: usize) -> f64 {
    let l = log(2.0 * d as f64);
    LEG_C1 * radius * x_max * y_max * (sqrt(horizon as f64 * l) + 8.0 * l) + LEG_C2 * y_max * y_max
}

/// `a + b√a + b²`, which dominates every `x ≥ 0` with `x ≤ a + b√x`.
pub fn solve_quadratic_regret(a: f64, b: f64) -> f64 {
    a + b * sqrt(a) + b * b
}

/// Envelope `κ₀ (UXY√(T ln d) + Y²k ln T + Y² max{(√T X/Y)^{1/k}, (Y/(√T X))^{1/k}})`
/// for the fully adaptive forecaster; the multiplier `κ₀` is heuristic.
pub fn fully_adaptive_envelope(
    multiplier: f64,
    radius: f64,
    x_max: f64,
    y_max: f64,
    horizon: usize,
    d: usize,
    k: f64,
) -> f64 {
    let t = horizon as f64;
    let y2 = y_max * y_max;
    let ratio = sqrt(t) * x_max / y_max;
    let spread = pow(ratio, 1.0 / k).max(pow(1.0 / ratio, 1.0 / k));
    multiplier * (radius * x_max * y_max * sqrt(t * log(d as f64)) + y2 * k * log(t) + y2 * spread)
}
