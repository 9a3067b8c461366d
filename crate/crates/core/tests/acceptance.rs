//! The acceptance suite: one test per criterion, printing a pass/fail line
//! with the measured runtime. Run with `--nocapture` to see the lines.

use std::time::Instant;

use opf_core::selftest::{self, CriterionResult, Fault};

fn run(criterion: impl FnOnce() -> CriterionResult) {
    let start = Instant::now();
    let result = criterion();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[{}] {} — {} ({:.2}s): {}",
        result.id,
        if result.passed { "PASS" } else { "FAIL" },
        result.description,
        elapsed,
        result.detail
    );
    assert!(result.passed, "[{}] {}", result.id, result.detail);
}

#[test]
fn a1_exact_invariant_curve_theorem() {
    run(|| selftest::criterion_a1(Fault::None));
}

#[test]
fn a2_darboux_invariant() {
    run(selftest::criterion_a2);
}

#[test]
fn a3_finite_classification_family_a() {
    run(selftest::criterion_a3);
}

#[test]
fn a4_finite_classification_family_b() {
    run(selftest::criterion_a4);
}

#[test]
fn a5_infinity_classification() {
    run(selftest::criterion_a5);
}

#[test]
fn a6_chebyshev_exact_ode() {
    run(selftest::criterion_a6);
}

#[test]
fn a7_chebyshev_first_integrals() {
    run(selftest::criterion_a7);
}

#[test]
fn a8_portrait_integrity() {
    run(selftest::criterion_a8);
}
