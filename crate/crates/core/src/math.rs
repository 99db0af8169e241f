pub(crate) use libm::{ceil, exp, exp2, floor, log, log2, pow, sin, sqrt};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub(crate) fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Smallest `k` with `2^k >= v`, exact for every positive finite `v`.
pub(crate) fn ceil_log2(v: f64) -> i32 {
    debug_assert!(v > 0.0 && v.is_finite());
    let (mantissa, exponent) = libm::frexp(v);
    if mantissa == 0.5 {
        exponent - 1
    } else {
        exponent
    }
}

pub(crate) fn pow2(k: i32) -> f64 {
    libm::ldexp(1.0, k)
}

/// `⌈log₂ v⌉₊`, i.e. `max(0, ⌈log₂ v⌉)`.
pub(crate) fn ceil_log2_plus(v: f64) -> usize {
    if v <= 1.0 {
        0
    } else {
        ceil_log2(v) as usize
    }
}
