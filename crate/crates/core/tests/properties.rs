use proptest::prelude::*;

use ell1_core::adaptive_eg::{AdaptiveEgSquare, EgState, TUNING_C};
use ell1_core::bounds::{corollary2, prop1, remark1, solve_quadratic_regret, theorem1, theorem3, theorem4, SCALING_C};
use ell1_core::comparator::RoundLoss;
use ell1_core::ewa::Ewa;
use ell1_core::lipschitz::LipLoss;
use ell1_core::maurey::{cardinality_bound, enumerate_grid, grid_cardinality};
use ell1_core::{alpha_loss, clip, square_loss_gradient, Forecaster, LossSpec, Round};

fn unit() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn clip_is_idempotent(v in -1e6f64..1e6, b in 0.0f64..1e3) {
        prop_assert_eq!(clip(clip(v, b), b), clip(v, b));
        prop_assert!(clip(v, b).abs() <= b);
    }

    #[test]
    fn clipping_never_hurts(v in -10.0f64..10.0, b in 0.0f64..5.0, s in unit()) {
        let y = s * b;
        prop_assert!((y - clip(v, b)).powi(2) <= (y - v).powi(2));
    }

    #[test]
    fn square_gradient_matches_finite_differences(
        u in prop::collection::vec(unit(), 4),
        x in prop::collection::vec(unit(), 4),
        y in unit(),
    ) {
        let r = Round::new(x.clone(), y).unwrap();
        let g = square_loss_gradient(&u, &r).unwrap();
        let h = 1e-5;
        let f = |w: &[f64]| alpha_loss(y, dot(w, &x), LossSpec::SQUARE);
        let mut err: f64 = 0.0;
        for j in 0..4 {
            let mut up = u.clone();
            let mut dn = u.clone();
            up[j] += h;
            dn[j] -= h;
            err = err.max(((f(&up) - f(&dn)) / (2.0 * h) - g[j]).abs());
        }
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(err / scale <= 1e-6);
    }

    #[test]
    fn lip_sandwich(y in unit(), slack in 0.0f64..1.0, v in -5.0f64..5.0, alpha in 2.0f64..5.0) {
        let b = y.abs() + slack;
        let spec = LossSpec::new(alpha).unwrap();
        let l = LipLoss::new(vec![1.0], y, b, spec).unwrap();
        let lo = alpha_loss(y, clip(v, b), spec);
        let hi = alpha_loss(y, v, spec);
        let mid = l.value_at(v);
        prop_assert!(lo <= mid + 1e-12 * (1.0 + mid));
        prop_assert!(mid <= hi + 1e-12 * (1.0 + hi));
    }

    #[test]
    fn lip_convex_in_prediction(
        y in unit(), slack in 0.0f64..1.0,
        v1 in -4.0f64..4.0, v2 in -4.0f64..4.0, lam in 0.0f64..1.0,
        alpha in 2.0f64..4.0,
    ) {
        let b = y.abs() + slack;
        let l = LipLoss::new(vec![1.0], y, b, LossSpec::new(alpha).unwrap()).unwrap();
        let lhs = l.value_at(lam * v1 + (1.0 - lam) * v2);
        let rhs = lam * l.value_at(v1) + (1.0 - lam) * l.value_at(v2);
        prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn lip_gradient_globally_bounded(
        y in unit(), ymax_extra in 0.0f64..1.0,
        u in prop::collection::vec(-50.0f64..50.0, 3),
        x in prop::collection::vec(unit(), 3),
        alpha in 2.0f64..4.0,
    ) {
        let y_max = y.abs() + ymax_extra;
        let b = ell1_core::lipschitz::update_threshold(0.0, y_max, alpha).unwrap();
        let l = LipLoss::new(x.clone(), y, b, LossSpec::new(alpha).unwrap()).unwrap();
        let g = l.gradient(&u);
        let g_inf = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let x_inf = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let limit = alpha * (1.0 + 2f64.powf(1.0 / alpha)).powf(alpha - 1.0) * y_max.powf(alpha - 1.0) * x_inf;
        prop_assert!(g_inf <= limit * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn eg_invariants(seed in any::<u64>(), d in 1usize..6, radius in 0.1f64..10.0) {
        let rng = ell1_core::sequences::CounterRng::new(seed);
        let mut eg = EgState::new(radius, d).unwrap();
        let mut range_max: f64 = 0.0;
        let mut prev_e = 0.0;
        let mut prev_v = 0.0;
        for t in 0..60u64 {
            let scale = if t % 7 == 0 { 0.0 } else { 3.0 };
            let g: Vec<f64> = (0..d as u64).map(|j| rng.symmetric(t * 16 + j, scale)).collect();
            let z_range = 2.0 * radius * g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            range_max = range_max.max(z_range);
            eg.update(&g).unwrap();
            let p = eg.weights().as_slice();
            prop_assert!(p.iter().all(|&w| w >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let norm: f64 = eg.point().iter().map(|v| v.abs()).sum();
            prop_assert!(norm <= radius * (1.0 + 1e-12));
            let tune = eg.tuning();
            prop_assert!(tune.e_hat() >= prev_e && tune.variance() >= prev_v);
            prev_e = tune.e_hat();
            prev_v = tune.variance();
            if range_max > 0.0 {
                prop_assert!(tune.e_hat() >= range_max && tune.e_hat() < 2.0 * range_max);
                prop_assert_eq!(tune.e_hat().log2().fract(), 0.0);
                prop_assert!(eg.eta() <= 1.0 / tune.e_hat());
            }
            if tune.variance() > 0.0 {
                let branch = TUNING_C * ((2 * d) as f64).ln().sqrt() / tune.variance().sqrt();
                prop_assert!(eg.eta() <= branch * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn ewa_small_regret(seed in any::<u64>(), k in 1usize..10) {
        let rng = ell1_core::sequences::CounterRng::new(seed);
        let mut ewa = Ewa::tuned(k, 1.0).unwrap();
        let mut loss = 0.0;
        let mut expert = vec![0.0; k];
        for t in 0..80u64 {
            let preds: Vec<f64> = (0..k as u64).map(|j| rng.symmetric(t * 32 + j, 1.5)).collect();
            let y = rng.symmetric(t * 32 + 31, 1.0);
            let p = ewa.predict(&preds).unwrap();
            loss += (y - p) * (y - p);
            for (e, v) in expert.iter_mut().zip(&preds) {
                *e += (y - v) * (y - v);
            }
            ewa.feed(&preds, y).unwrap();
        }
        let best = expert.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(loss <= best + 8.0 * (k as f64).ln());
    }

    #[test]
    fn quadratic_solution_dominates_fixpoint(a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let fix = ((b + (b * b + 4.0 * a).sqrt()) / 2.0).powi(2);
        prop_assert!(solve_quadratic_regret(a, b) >= fix * (1.0 - 1e-12));
    }

    #[test]
    fn bounds_monotone(
        u in 0.01f64..10.0, x in 0.01f64..10.0, y in 0.01f64..10.0,
        t in 1usize..10_000, d in 1usize..50, f in 1.0f64..3.0,
    ) {
        let t2 = ((t as f64) * f).ceil() as usize;
        let mono = |g: &dyn Fn(f64, f64, f64, usize) -> f64| {
            let base = g(u, x, y, t);
            let tol = 1e-12 * base.abs().max(1.0);
            g(u * f, x, y, t) >= base - tol
                && g(u, x * f, y, t) >= base - tol
                && g(u, x, y * f, t) >= base - tol
                && g(u, x, y, t2) >= base - tol
        };
        prop_assert!(mono(&|u, x, y, t| corollary2(u, x, y, t, d, None)));
        prop_assert!(mono(&|u, x, y, t| remark1(u, x, y, t, d)));
        prop_assert!(mono(&|u, x, y, t| theorem4(u, x, y, t, d, SCALING_C, 11.0)));
        prop_assert!(mono(&|u, x, y, _| theorem3(u, x, y, 3.0, d, 5.0)));
        prop_assert!(mono(&|u, _, _, t| prop1(u, t as f64, 1.0, d)));
    }

    #[test]
    fn theorem1_monotone_within_a_case(u in 0.01f64..10.0, t in 4usize..2000, d in 1usize..20, f in 1.0f64..1.5) {
        let k0 = ell1_core::bounds::kappa(u, 1.0, 1.0, t, d).label;
        let k1 = ell1_core::bounds::kappa(u * f, 1.0, 1.0, t, d).label;
        if k0 == k1 {
            prop_assert!(theorem1(u * f, 1.0, 1.0, t, d) >= theorem1(u, 1.0, 1.0, t, d) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn adaptive_eg_is_causal(seed in any::<u64>(), split in 1usize..30) {
        let rng = ell1_core::sequences::CounterRng::new(seed);
        let other = ell1_core::sequences::CounterRng::new(seed ^ 0xABCD);
        let mut a = AdaptiveEgSquare::new(1.0, 3).unwrap();
        let mut b = AdaptiveEgSquare::new(1.0, 3).unwrap();
        for t in 0..40u64 {
            let x: Vec<f64> = (0..3).map(|j| rng.symmetric(t * 8 + j, 1.0)).collect();
            let pa = a.predict(&x).unwrap();
            let pb = b.predict(&x).unwrap();
            if (t as usize) <= split {
                prop_assert_eq!(pa.to_bits(), pb.to_bits());
            }
            let ya = rng.symmetric(t * 8 + 7, 1.0);
            let yb = if (t as usize) < split { ya } else { other.symmetric(t, 1.0) };
            a.feed(ya).unwrap();
            b.feed(yb).unwrap();
        }
    }
}

#[test]
fn grid_cardinality_matches_brute_force() {
    for d in 1..=3usize {
        for m in 1..=5usize {
            let mut count = 0usize;
            let range = -(m as i64)..=(m as i64);
            for k1 in range.clone() {
                for k2 in if d >= 2 { range.clone() } else { 0..=0 } {
                    for k3 in if d >= 3 { range.clone() } else { 0..=0 } {
                        if k1.abs() + k2.abs() + k3.abs() <= m as i64 {
                            count += 1;
                        }
                    }
                }
            }
            assert_eq!(grid_cardinality(d, m), count as f64);
            assert_eq!(enumerate_grid(d, m, 1.0).unwrap().len(), count);
            assert!(count as f64 <= cardinality_bound(d, m));
        }
    }
}
