//! Offline solver for the comparator term `min_{‖u‖₁ ≤ U} Σ_t ℓ_t(u)`.
//!
//! The feasible set is the convex hull of the `2d` signed vertices `±U e_j`,
//! so the solver works on barycentric weights over those vertices and runs
//! pairwise conditional-gradient steps (move mass from the worst active
//! vertex to the best vertex) with exact line search. The Frank–Wolfe gap
//! `∇f(u)·u + U ‖∇f(u)‖∞` upper bounds `f(u) - min f` and is reported as the
//! optimality certificate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_positive, Error, Result};
use crate::math::{dot, norm1, pow};
use crate::types::{stream_dimension, LossSpec, Round};

pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparatorResult {
    pub u_star: Vec<f64>,
    pub loss: f64,
    /// Certified bound on `loss - min`.
    pub gap: f64,
    pub iterations: usize,
}

impl ComparatorResult {
    /// Certified lower bound on the true minimum.
    pub fn lower_bound(&self) -> f64 {
        (self.loss - self.gap).max(0.0)
    }
}

/// `1e-9 · max(1, Σ y_t²)`.
pub fn default_tolerance(rounds: &[Round]) -> f64 {
    let energy: f64 = rounds.iter().map(|r| r.y * r.y).sum();
    1e-9 * energy.max(1.0)
}

/// Convex, continuously differentiable objective over `R^d`.
pub trait SmoothObjective {
    fn dim(&self) -> usize;
    fn value(&self, u: &[f64]) -> f64;
    fn gradient(&self, u: &[f64], out: &mut [f64]);
    /// Minimizer of `step ↦ value(u + step·dir)` over `[0, max_step]`;
    /// `grad` is the gradient at `u`.
    fn line_search(&self, u: &[f64], grad: &[f64], dir: &[f64], max_step: f64) -> f64;
}

/// A convex loss of the scalar prediction `v = u·x_t`.
pub trait RoundLoss {
    fn input(&self) -> &[f64];
    fn value_at(&self, v: f64) -> f64;
    fn slope_at(&self, v: f64) -> f64;
    fn curvature_at(&self, v: f64) -> f64;
}

/// `Σ_t (y_t - u·x_t)²` through its Gram matrix.
pub struct SquareObjective<'a> {
    rounds: &'a [Round],
    dim: usize,
    gram: Vec<f64>,
    xty: Vec<f64>,
}

impl<'a> SquareObjective<'a> {
    pub fn new(rounds: &'a [Round]) -> Result<Self> {
        let dim = stream_dimension(rounds)?;
        let mut gram = vec![0.0; dim * dim];
        let mut xty = vec![0.0; dim];
        for r in rounds {
            for i in 0..dim {
                xty[i] += r.y * r.x[i];
                let row = &mut gram[i * dim..(i + 1) * dim];
                for (g, xj) in row.iter_mut().zip(&r.x) {
                    *g += r.x[i] * xj;
                }
            }
        }
        Ok(SquareObjective { rounds, dim, gram, xty })
    }

    fn quad(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, ai) in a.iter().enumerate() {
            if *ai != 0.0 {
                acc += ai * dot(&self.gram[i * self.dim..(i + 1) * self.dim], b);
            }
        }
        acc
    }
}

impl SmoothObjective for SquareObjective<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.rounds
            .iter()
            .map(|r| {
                let e = r.y - dot(u, &r.x);
                e * e
            })
            .sum()
    }

    fn gradient(&self, u: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = 2.0 * (dot(&self.gram[i * self.dim..(i + 1) * self.dim], u) - self.xty[i]);
        }
    }

    fn line_search(&self, _u: &[f64], grad: &[f64], dir: &[f64], max_step: f64) -> f64 {
        let slope = dot(grad, dir);
        let curvature = self.quad(dir, dir);
        if curvature <= 0.0 {
            return if slope < 0.0 { max_step } else { 0.0 };
        }
        (-slope / (2.0 * curvature)).clamp(0.0, max_step)
    }
}

/// `Σ_t ψ_t(u·x_t)` for per-round convex losses `ψ_t`.
pub struct SeparableObjective<'a, L> {
    losses: &'a [L],
    dim: usize,
}

impl<'a, L: RoundLoss> SeparableObjective<'a, L> {
    pub fn new(losses: &'a [L]) -> Result<Self> {
        let first = losses.first().ok_or(Error::EmptyStream)?;
        let dim = first.input().len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if let Some(l) = losses.iter().find(|l| l.input().len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: l.input().len() });
        }
        Ok(SeparableObjective { losses, dim })
    }
}

impl<L: RoundLoss> SmoothObjective for SeparableObjective<'_, L> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, u: &[f64]) -> f64 {
        self.losses.iter().map(|l| l.value_at(dot(u, l.input()))).sum()
    }

    fn gradient(&self, u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for l in self.losses {
            let x = l.input();
            let s = l.slope_at(dot(u, x));
            if s != 0.0 {
                for (o, xj) in out.iter_mut().zip(x) {
                    *o += s * xj;
                }
            }
        }
    }

    fn line_search(&self, u: &[f64], grad: &[f64], dir: &[f64], max_step: f64) -> f64 {
        let along: Vec<(f64, f64)> = self
            .losses
            .iter()
            .map(|l| (dot(u, l.input()), dot(dir, l.input())))
            .collect();
        let derivatives = |step: f64| {
            along.iter().zip(self.losses).fold((0.0, 0.0), |(d1, d2), (&(z, w), l)| {
                if w == 0.0 {
                    (d1, d2)
                } else {
                    let v = z + step * w;
                    (d1 + w * l.slope_at(v), d2 + w * w * l.curvature_at(v))
                }
            })
        };
        let _ = grad;
        let (d0, h0) = derivatives(0.0);
        if d0 >= 0.0 {
            return 0.0;
        }
        let (dmax, _) = derivatives(max_step);
        if dmax <= 0.0 {
            return max_step;
        }
        // Safeguarded Newton on the nondecreasing derivative.
        let (mut lo, mut hi) = (0.0, max_step);
        let mut step = if h0 > 0.0 { -d0 / h0 } else { 0.5 * max_step };
        if !(step > lo && step < hi) {
            step = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let (d, h) = derivatives(step);
            if d == 0.0 {
                return step;
            }
            if d < 0.0 {
                lo = step;
            } else {
                hi = step;
            }
            if hi - lo <= 1e-15 * max_step {
                break;
            }
            let newton = if h > 0.0 { step - d / h } else { f64::NAN };
            step = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        // Never step past a point where the derivative was seen positive.
        lo
    }
}

/// Pairwise conditional gradient over `B₁(radius)`, stopping once the
/// Frank–Wolfe gap is at most `tol`.
pub fn minimize_l1<O: SmoothObjective + ?Sized>(
    objective: &O,
    radius: f64,
    tol: f64,
    max_iterations: usize,
) -> Result<ComparatorResult> {
    ensure_positive("radius", radius)?;
    ensure_positive("tol", tol)?;
    let d = objective.dim();
    let n = 2 * d;
    let mut weights = vec![1.0 / n as f64; n];
    let mut u = vec![0.0; d];
    let mut grad = vec![0.0; d];
    let mut dir = vec![0.0; d];

    let point_from = |weights: &[f64], u: &mut [f64]| {
        for (j, uj) in u.iter_mut().enumerate() {
            *uj = radius * (weights[2 * j] - weights[2 * j + 1]);
        }
    };
    // Score of vertex i: ⟨grad, ±U e_j⟩.
    let score = |grad: &[f64], i: usize| {
        let g = radius * grad[i / 2];
        if i.is_multiple_of(2) {
            g
        } else {
            -g
        }
    };
    let set_vertex = |dir: &mut [f64], i: usize, scale: f64| {
        dir[i / 2] += if i.is_multiple_of(2) { scale * radius } else { -scale * radius };
    };

    let mut iterations = 0;
    let gap = loop {
        objective.gradient(&u, &mut grad);
        let mut best = 0;
        for i in 1..n {
            if score(&grad, i) < score(&grad, best) {
                best = i;
            }
        }
        let gap = (dot(&grad, &u) - score(&grad, best)).max(0.0);
        if gap <= tol {
            break gap;
        }
        if iterations >= max_iterations {
            return Err(Error::NotConverged { gap, iterations });
        }
        iterations += 1;

        let mut away = None;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 && away.is_none_or(|a| score(&grad, i) > score(&grad, a)) {
                away = Some(i);
            }
        }
        let away = away.expect("weights form a probability vector");

        dir.iter_mut().for_each(|v| *v = 0.0);
        set_vertex(&mut dir, best, 1.0);
        set_vertex(&mut dir, away, -1.0);
        let max_step = weights[away];
        let step = objective.line_search(&u, &grad, &dir, max_step);
        if step > 0.0 {
            weights[best] += step;
            weights[away] = if step >= max_step { 0.0 } else { weights[away] - step };
        } else {
            // Pairwise step stalled numerically; fall back to a plain
            // Frank-Wolfe step towards the best vertex.
            dir.iter_mut().zip(&u).for_each(|(v, uj)| *v = -uj);
            set_vertex(&mut dir, best, 1.0);
            let step = objective.line_search(&u, &grad, &dir, 1.0);
            if step <= 0.0 {
                return Err(Error::NotConverged { gap, iterations });
            }
            weights.iter_mut().for_each(|w| *w *= 1.0 - step);
            weights[best] += step;
        }
        if iterations % 1024 == 0 {
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
        }
        point_from(&weights, &mut u);
    };

    let norm = norm1(&u);
    if norm > radius {
        u.iter_mut().for_each(|v| *v *= radius / norm);
    }
    Ok(ComparatorResult { loss: objective.value(&u), u_star: u, gap, iterations })
}

/// `min_{‖u‖₁ ≤ U} Σ_t (y_t - u·x_t)²` with a certified gap `≤ tol`.
pub fn min_square_loss_l1(rounds: &[Round], radius: f64, tol: f64) -> Result<ComparatorResult> {
    ensure_positive("tol", tol)?;
    let objective = SquareObjective::new(rounds)?;
    minimize_l1(&objective, radius, tol, MAX_ITERATIONS)
}

/// α-loss of one round as a function of the scalar prediction.
#[derive(Debug, Clone, Copy)]
pub struct AlphaRound<'a> {
    pub round: &'a Round,
    pub spec: LossSpec,
}

impl RoundLoss for AlphaRound<'_> {
    fn input(&self) -> &[f64] {
        &self.round.x
    }

    fn value_at(&self, v: f64) -> f64 {
        crate::loss::alpha_loss(self.round.y, v, self.spec)
    }

    fn slope_at(&self, v: f64) -> f64 {
        let r = self.round.y - v;
        let a = self.spec.alpha();
        -a * crate::loss::sign(r) * pow(r.abs(), a - 1.0)
    }

    fn curvature_at(&self, v: f64) -> f64 {
        let a = self.spec.alpha();
        a * (a - 1.0) * pow((self.round.y - v).abs(), a - 2.0)
    }
}

/// `min_{‖u‖₁ ≤ U} Σ_t |y_t - u·x_t|^α` with a certified gap `≤ tol`.
pub fn min_alpha_loss_l1(
    rounds: &[Round],
    radius: f64,
    spec: LossSpec,
    tol: f64,
) -> Result<ComparatorResult> {
    ensure_positive("tol", tol)?;
    stream_dimension(rounds)?;
    let losses: Vec<AlphaRound<'_>> = rounds.iter().map(|round| AlphaRound { round, spec }).collect();
    let objective = SeparableObjective::new(&losses)?;
    minimize_l1(&objective, radius, tol, MAX_ITERATIONS)
}

/// Minimizes a sum of arbitrary [`RoundLoss`] terms over `B₁(radius)`.
pub fn min_round_losses_l1<L: RoundLoss>(
    losses: &[L],
    radius: f64,
    tol: f64,
) -> Result<ComparatorResult> {
    ensure_positive("tol", tol)?;
    let objective = SeparableObjective::new(losses)?;
    minimize_l1(&objective, radius, tol, MAX_ITERATIONS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round(x: &[f64], y: f64) -> Round {
        Round::new(x.to_vec(), y).unwrap()
    }

    #[test]
    fn vertex_attains_zero() {
        let rounds = [round(&[1.0, 0.0], 1.0)];
        let res = min_square_loss_l1(&rounds, 1.0, 1e-12).unwrap();
        assert!((res.u_star[0] - 1.0).abs() < 1e-9);
        assert!(res.u_star[1].abs() < 1e-9);
        assert!(res.loss < 1e-12);
    }

    #[test]
    fn radius_binds() {
        let rounds = [round(&[1.0, 0.0], 1.0)];
        let res = min_square_loss_l1(&rounds, 0.5, 1e-12).unwrap();
        assert!((res.loss - 0.25).abs() < 1e-9);
        assert!(norm1(&res.u_star) <= 0.5 + 1e-12);
    }

    #[test]
    fn alpha_three_single_round() {
        let rounds = [round(&[1.0], 2.0)];
        let spec = LossSpec::new(3.0).unwrap();
        let res = min_alpha_loss_l1(&rounds, 1.0, spec, 1e-12).unwrap();
        assert!((res.loss - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let rounds = [round(&[1.0], 2.0)];
        assert!(min_square_loss_l1(&rounds, 1.0, 0.0).is_err());
        assert!(min_square_loss_l1(&rounds, 1.0, -1.0).is_err());
        assert!(min_square_loss_l1(&[], 1.0, 1e-9).is_err());
    }

    #[test]
    fn zero_observations_give_zero() {
        let rounds = [round(&[1.0, -1.0], 0.0), round(&[0.5, 0.2], 0.0)];
        let res = min_square_loss_l1(&rounds, 2.0, 1e-12).unwrap();
        assert!(res.loss <= 1e-12);
    }

    #[test]
    fn tie_break_prefers_lowest_positive_vertex() {
        // Both coordinates are equally useful; the first move goes to +U e_1.
        let rounds = [round(&[1.0, 1.0], 1.0)];
        let objective = SquareObjective::new(&rounds).unwrap();
        let res = minimize_l1(&objective, 1.0, 1e-14, 1).unwrap_or_else(|_| {
            minimize_l1(&objective, 1.0, 1e-14, MAX_ITERATIONS).unwrap()
        });
        assert!(res.loss < 1e-12);
    }
}
