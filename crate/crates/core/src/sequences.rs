//! Seeded stream generators.
//!
//! All randomness comes from [`CounterRng`], a counter-based SplitMix64:
//! draw `i` of seed `s` is `mix(s + (i + 1)·0x9E3779B97F4A7C15)`, so any
//! round can be regenerated independently and the output is identical on
//! every platform and in any language that reimplements the three
//! constants.

use alloc::vec::Vec;

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::loss::clip;
use crate::math::{dot, log, norm1, sin, sqrt};
use crate::types::Round;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stateless SplitMix64 keyed by `(seed, counter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed }
    }

    /// An independent generator for purpose `lane`.
    pub fn fork(&self, lane: u64) -> Self {
        CounterRng::new(self.bits(u64::MAX - lane))
    }

    pub fn bits(&self, counter: u64) -> u64 {
        let mut z = self.seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&self, counter: u64) -> f64 {
        (self.bits(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1)`.
    pub fn open01(&self, counter: u64) -> f64 {
        ((self.bits(counter) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-bound, bound)`.
    pub fn symmetric(&self, counter: u64, bound: f64) -> f64 {
        bound * (2.0 * self.uniform(counter) - 1.0)
    }

    /// Standard normal through the inverse CDF.
    pub fn gaussian(&self, counter: u64) -> f64 {
        inverse_normal_cdf(self.open01(counter))
    }
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error below `1.15e-9` on `(0, 1)`).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail(sqrt(-2.0 * log(p)))
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(sqrt(-2.0 * log(1.0 - p)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamConfig {
    pub dim: usize,
    pub horizon: usize,
    pub x_max: f64,
    pub y_max: f64,
    pub seed: u64,
}

impl StreamConfig {
    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if self.horizon == 0 {
            return Err(Error::EmptyStream);
        }
        ensure_nonnegative("x_max", self.x_max)?;
        ensure_nonnegative("y_max", self.y_max)
    }
}

/// Generator selection, for callers that pick one at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamKind {
    Uniform,
    Zero,
    SparseLinear { sparsity: usize, noise: f64, radius: f64 },
    Sinusoidal { weights: Vec<f64>, gamma: f64, sigma: f64 },
}

pub fn generate(cfg: &StreamConfig, kind: &StreamKind) -> Result<Vec<Round>> {
    match kind {
        StreamKind::Uniform => gen_uniform_bounded(cfg),
        StreamKind::Zero => gen_zero(cfg),
        StreamKind::SparseLinear { sparsity, noise, radius } => {
            gen_sparse_linear(cfg, *sparsity, *noise, *radius).map(|s| s.rounds)
        }
        StreamKind::Sinusoidal { weights, gamma, sigma } => gen_sinusoidal_model(cfg, weights, *gamma, *sigma),
    }
}

/// `x_t ≡ 0`, `y_t ≡ 0`.
pub fn gen_zero(cfg: &StreamConfig) -> Result<Vec<Round>> {
    cfg.validate()?;
    Ok((0..cfg.horizon).map(|_| Round { x: alloc::vec![0.0; cfg.dim], y: 0.0 }).collect())
}

/// Entries of `x_t` i.i.d. uniform on `[-X, X]`, `y_t` uniform on `[-Y, Y]`.
/// Draw `j < d` of round `t` uses counter `t(d+1) + j`; `y_t` uses `t(d+1) + d`.
pub fn gen_uniform_bounded(cfg: &StreamConfig) -> Result<Vec<Round>> {
    cfg.validate()?;
    let rng = CounterRng::new(cfg.seed);
    let stride = cfg.dim as u64 + 1;
    Ok((0..cfg.horizon as u64)
        .map(|t| {
            let base = t * stride;
            let x = (0..cfg.dim as u64).map(|j| rng.symmetric(base + j, cfg.x_max)).collect();
            Round { x, y: rng.symmetric(base + cfg.dim as u64, cfg.y_max) }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseStream {
    pub rounds: Vec<Round>,
    pub u_star: Vec<f64>,
}

/// `y_t = [u*·x_t + noise·ε_t]_Y` with uniform inputs and a `sparsity`-sparse
/// `u*` of ℓ¹-norm `radius`.
pub fn gen_sparse_linear(cfg: &StreamConfig, sparsity: usize, noise: f64, radius: f64) -> Result<SparseStream> {
    cfg.validate()?;
    if sparsity == 0 || sparsity > cfg.dim {
        return Err(Error::InvalidParameter { name: "sparsity", value: sparsity as f64 });
    }
    ensure_nonnegative("noise", noise)?;
    ensure_positive("radius", radius)?;
    let rng = CounterRng::new(cfg.seed);
    let support_rng = rng.fork(1);
    let noise_rng = rng.fork(2);

    // Partial Fisher-Yates over coordinates.
    let mut order: Vec<usize> = (0..cfg.dim).collect();
    for i in 0..sparsity {
        let span = (cfg.dim - i) as u64;
        let j = i + (support_rng.bits(i as u64) % span) as usize;
        order.swap(i, j);
    }
    let mut u_star = alloc::vec![0.0; cfg.dim];
    for (i, &j) in order[..sparsity].iter().enumerate() {
        let magnitude = 0.5 + 0.5 * support_rng.uniform(1000 + 2 * i as u64);
        let sign = if support_rng.bits(1001 + 2 * i as u64) & 1 == 0 { 1.0 } else { -1.0 };
        u_star[j] = sign * magnitude;
    }
    let scale = radius / norm1(&u_star);
    u_star.iter_mut().for_each(|v| *v *= scale);

    let mut rounds = gen_uniform_bounded(cfg)?;
    for (t, r) in rounds.iter_mut().enumerate() {
        let clean = dot(&u_star, &r.x);
        let eps = if noise > 0.0 { noise * noise_rng.gaussian(t as u64) } else { 0.0 };
        r.y = clip(clean + eps, cfg.y_max);
    }
    Ok(SparseStream { rounds, u_star })
}

/// `X_t` uniform on `[-π, π]`, `x_t = (γ√2 sin(j X_t))_{j=1..d}`,
/// `y_t = u·x_t + σ ε_t`. `cfg.x_max` and `cfg.y_max` are ignored.
pub fn gen_sinusoidal_model(cfg: &StreamConfig, u: &[f64], gamma: f64, sigma: f64) -> Result<Vec<Round>> {
    cfg.validate()?;
    if u.len() != cfg.dim {
        return Err(Error::DimensionMismatch { expected: cfg.dim, found: u.len() });
    }
    ensure_positive("gamma", gamma)?;
    ensure_nonnegative("sigma", sigma)?;
    let norm = norm1(u);
    if norm > 1.0 + 1e-12 {
        return Err(Error::NormTooLarge { norm, limit: 1.0 });
    }
    let rng = CounterRng::new(cfg.seed);
    let noise_rng = rng.fork(1);
    let amplitude = gamma * core::f64::consts::SQRT_2;
    Ok((0..cfg.horizon as u64)
        .map(|t| {
            let s = rng.symmetric(t, core::f64::consts::PI);
            let x: Vec<f64> = (1..=cfg.dim).map(|j| amplitude * sin(j as f64 * s)).collect();
            let eps = if sigma > 0.0 { sigma * noise_rng.gaussian(t) } else { 0.0 };
            Round { y: dot(u, &x) + eps, x }
        })
        .collect())
}
