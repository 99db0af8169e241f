use ell1_core::comparator::{default_tolerance, min_alpha_loss_l1, min_square_loss_l1};
use ell1_core::sequences::{gen_uniform_bounded, CounterRng, StreamConfig};
use ell1_core::{alpha_loss, LossSpec, Round};

fn stream(d: usize, t: usize, seed: u64) -> Vec<Round> {
    gen_uniform_bounded(&StreamConfig { dim: d, horizon: t, x_max: 1.0, y_max: 1.0, seed }).unwrap()
}

fn objective(rounds: &[Round], u: &[f64], spec: LossSpec) -> f64 {
    rounds
        .iter()
        .map(|r| alpha_loss(r.y, u.iter().zip(&r.x).map(|(a, b)| a * b).sum(), spec))
        .sum()
}

/// Minimum over the lattice `{(i, j)/steps : |i| + |j| ≤ steps}` scaled by `radius`.
fn grid_min_2d(rounds: &[Round], radius: f64, steps: i64, spec: LossSpec) -> f64 {
    let mut best = f64::INFINITY;
    for i in -steps..=steps {
        let rest = steps - i.abs();
        for j in -rest..=rest {
            let u = [radius * i as f64 / steps as f64, radius * j as f64 / steps as f64];
            best = best.min(objective(rounds, &u, spec));
        }
    }
    best
}

fn grid_min_3d(rounds: &[Round], radius: f64, steps: i64, spec: LossSpec) -> f64 {
    let mut best = f64::INFINITY;
    for i in -steps..=steps {
        let r1 = steps - i.abs();
        for j in -r1..=r1 {
            let r2 = r1 - j.abs();
            for k in -r2..=r2 {
                let s = steps as f64;
                let u = [radius * i as f64 / s, radius * j as f64 / s, radius * k as f64 / s];
                best = best.min(objective(rounds, &u, spec));
            }
        }
    }
    best
}

#[test]
fn square_matches_dense_grid() {
    for seed in 0..3 {
        let rounds = stream(2, 3, seed);
        let res = min_square_loss_l1(&rounds, 1.0, 1e-12).unwrap();
        let grid = grid_min_2d(&rounds, 1.0, 1000, LossSpec::SQUARE);
        assert!((res.loss - grid).abs() < 1e-4, "{} vs {}", res.loss, grid);
        assert!(res.loss <= grid + 1e-12);
    }
}

#[test]
fn alpha_four_matches_dense_grid() {
    let spec = LossSpec::new(4.0).unwrap();
    for seed in 10..12 {
        let rounds = stream(2, 5, seed);
        let res = min_alpha_loss_l1(&rounds, 1.0, spec, 1e-12).unwrap();
        let grid = grid_min_2d(&rounds, 1.0, 1000, spec);
        assert!((res.loss - grid).abs() < 1e-4, "{} vs {}", res.loss, grid);
    }
}

#[test]
fn never_below_grid_minimum() {
    for seed in 0..6 {
        let d = 2 + (seed as usize % 2);
        let rounds = stream(d, 4 + seed as usize, 100 + seed);
        let tol = default_tolerance(&rounds);
        let res = min_square_loss_l1(&rounds, 1.5, tol).unwrap();
        let grid = if d == 2 {
            grid_min_2d(&rounds, 1.5, 200, LossSpec::SQUARE)
        } else {
            grid_min_3d(&rounds, 1.5, 40, LossSpec::SQUARE)
        };
        // Feasible and certified: min ≤ loss ≤ min + gap, and min ≤ grid.
        assert!(res.loss <= grid + tol);
        assert!(res.loss >= grid - 1e-3);
        assert!(res.lower_bound() <= grid + 1e-12);
        assert!(res.gap <= tol);
    }
}

#[test]
fn alpha_two_agrees_with_square_path() {
    for seed in 0..10 {
        let rounds = stream(4, 30, 200 + seed);
        let radius = 0.3 + seed as f64 * 0.2;
        let a = min_square_loss_l1(&rounds, radius, 1e-11).unwrap();
        let b = min_alpha_loss_l1(&rounds, radius, LossSpec::SQUARE, 1e-11).unwrap();
        assert!((a.loss - b.loss).abs() <= 1e-8, "{} vs {}", a.loss, b.loss);
    }
}

#[test]
fn monotone_in_radius_and_below_energy() {
    let rounds = stream(5, 60, 7);
    let energy: f64 = rounds.iter().map(|r| r.y * r.y).sum();
    let mut prev = f64::INFINITY;
    for radius in [0.05, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let res = min_square_loss_l1(&rounds, radius, default_tolerance(&rounds)).unwrap();
        assert!(res.loss <= prev + res.gap);
        assert!(res.loss <= energy);
        let norm: f64 = res.u_star.iter().map(|v| v.abs()).sum();
        assert!(norm <= radius + 1e-12);
        prev = res.loss;
    }
}

#[test]
fn certified_gap_bounds_suboptimality() {
    // Any feasible point has loss at least the certified lower bound.
    let rounds = stream(3, 20, 9);
    let res = min_square_loss_l1(&rounds, 1.0, 1e-9).unwrap();
    let rng = CounterRng::new(5);
    for i in 0..500 {
        let mut u: Vec<f64> = (0..3).map(|j| rng.symmetric(3 * i + j, 1.0)).collect();
        let n: f64 = u.iter().map(|v| v.abs()).sum();
        if n > 1.0 {
            u.iter_mut().for_each(|v| *v /= n);
        }
        assert!(objective(&rounds, &u, LossSpec::SQUARE) >= res.lower_bound() - 1e-12);
    }
}

#[test]
fn large_instance_converges() {
    let rounds = stream(50, 2000, 11);
    let tol = default_tolerance(&rounds);
    for radius in [0.1, 1.0, 10.0] {
        let res = min_square_loss_l1(&rounds, radius, tol).unwrap();
        assert!(res.gap <= tol);
    }
}
