//! The thirteen acceptance criteria, run in order at their stated
//! tolerances. Each prints one PASS/FAIL line to stdout, bypassing the
//! test harness capture, and the test fails if any line fails.

use std::io::Write;
use std::time::Instant;

use ell1::verify::{self, Check};

fn report(line: &Check) {
    let text = format!(
        "criterion {:>2} [{}] {:<24} {} ({:.2?}) {}\n",
        line.criterion,
        line.suite,
        line.name,
        line.status(),
        line.elapsed,
        line.detail
    );
    std::io::stdout().write_all(text.as_bytes()).unwrap();
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let mut checks: Vec<Check> = verify::eg_runs().unwrap().to_vec();
    checks.push(verify::leg_runs().unwrap());
    checks.push(verify::ewa_regret().unwrap());
    checks.push(verify::grid_approximation().unwrap());
    checks.push(verify::grid_cardinalities());
    checks.push(verify::maurey_runs().unwrap());
    checks.push(verify::scaling_runs().unwrap());
    checks.push(verify::gradients().unwrap());
    checks.push(verify::sandwich().unwrap());
    checks.push(verify::regime_sweep().unwrap());
    checks.push(verify::quadratic_dominance());
    checks.push(verify::reproducibility().unwrap());

    for (i, c) in checks.iter().enumerate() {
        assert_eq!(c.criterion as usize, i + 1);
        report(c);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let summary = format!("acceptance: {passed}/{} criteria passed in {:.2?}\n", checks.len(), start.elapsed());
    std::io::stdout().write_all(summary.as_bytes()).unwrap();

    assert!(checks[0].elapsed < verify::EG_TIME_LIMIT);
    assert!(checks[6].elapsed < verify::MAUREY_TIME_LIMIT);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.criterion).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
